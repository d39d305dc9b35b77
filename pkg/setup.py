from setuptools import setup, find_packages
setup(
    name="prpsim",
    version="0.1.0",
    packages=find_packages(exclude=["tests"]),
    install_requires=[
        "numpy",
        "matplotlib",
    ],
    extras_require={
        "test": ["pytest"],
    },
    entry_points={
        "console_scripts": [
            "prpsim = prpsim.simcli:main"
        ]
    }
)
