import math

LEG_NAMES = ("A", "B", "C")

SQRT3 = math.sqrt(3.0)
GRAVITY = 9.81
# trajectory pulsation of the raised-cosine law, rad/s
OMEGA_LAW = math.pi / 3.0
# axes 1 and 3 of every leg become parallel at phi = PHI_SINGULAR + k*pi
PHI_SINGULAR = math.pi / 3.0

SINGULAR_TOL = 1e-9
COND_LIMIT = 1e12

LAW_RAISED_COSINE = "raised_cosine"
LAW_HOLD = "hold"

EXIT_OK = 0
EXIT_SINGULAR = 2
EXIT_ORACLE = 3
EXIT_IO = 4

POSE_COLUMNS = ["t", "x", "y", "phi", "xd", "yd", "phid", "xdd", "ydd", "phidd"]
LEG_COLUMNS = ["lam10", "lam32", "lam10d", "lam32d", "lam10dd", "lam32dd",
               "f10", "f21y", "f21z", "p10"]
ENERGY_COLUMNS = ["T", "V", "dEdt", "sum_power", "ne_residual"]
CSV_COLUMNS = (POSE_COLUMNS
               + [f"{col}_{leg}" for leg in LEG_NAMES for col in LEG_COLUMNS]
               + ENERGY_COLUMNS)

PLOT_QUANTITIES = {
    "powers": ("p10", "W"),
    "f21y": ("f21y", "N"),
    "f21z": ("f21z", "N"),
}
