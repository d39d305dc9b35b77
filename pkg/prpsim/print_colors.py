import os
import sys


def _paint(code, text, newline, stream):
    if os.environ.get("NO_COLOR") or not getattr(stream, "isatty", lambda: False)():
        painted = text
    else:
        painted = f"\033[{code}m{text}\033[0m"
    print(painted, end="\n" if newline else "", file=stream, flush=True)


def print_green(text, newline=True):
    _paint(32, text, newline, sys.stdout)

def print_yellow(text, newline=True):
    _paint(33, text, newline, sys.stdout)

def print_red(text, newline=True):
    _paint(31, text, newline, sys.stderr)
