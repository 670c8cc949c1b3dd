"""Expected values fixed before the code was run against them.

Each entry is (chi, label) -> value.  Twists are in ascending order.
"""

SHAPES = {
    (3, "X0"): ((-2, -2, -1), (0, 0, 0)),
    (3, "X1"): ((-2, -2, -1, -1), (-1, 0, 0, 0)),
    (3, "X2"): ((-2, -2, -2), (-1, -1, 1)),
    (3, "X3"): ((-3, -1), (0, 1)),
    (1, "X0"): ((-2, -2, -2, -2), (-1, -1, -1, 0)),
    (1, "X1"): ((-3, -2), (0, 0)),
    (1, "X2"): ((-3, -2, -1), (-1, 0, 0)),
    (1, "X3"): ((-3, -3), (-2, 1)),
    (0, "X0"): ((-2,) * 5, (-1,) * 5),
    (0, "X1"): ((-3, -2, -2), (-1, -1, 0)),
    (0, "X2"): ((-3, -3, -1), (-2, 0, 0)),
    (0, "X3"): ((-4,), (1,)),
}

# (h0(F(-1)), h1(F), h0(F x Omega(1)))
ROWS = {
    (3, "X0"): (0, 0, 1), (3, "X1"): (0, 0, 2), (3, "X2"): (1, 0, 3), (3, "X3"): (1, 1, 4),
    (1, "X0"): (0, 0, 0), (1, "X1"): (0, 1, 0), (1, "X2"): (0, 1, 1), (1, "X3"): (1, 2, 3),
    (0, "X0"): (0, 0, 0), (0, "X1"): (0, 1, 0), (0, "X2"): (0, 2, 1), (0, "X3"): (1, 3, 3),
}

CODIM = {
    (3, "X0"): 0, (3, "X1"): 2, (3, "X2"): 3, (3, "X3"): 4,
    (1, "X0"): 0, (1, "X1"): 2, (1, "X2"): 3, (1, "X3"): 5,
    (0, "X0"): 0, (0, "X1"): 1, (0, "X2"): 4, (0, "X3"): 6,
}

# dim_W / dim_G / stabilizer dimension of a generic point
AUDIT = {
    (3, "X0"): (45, 19, 0), (3, "X1"): (60, 38, 2), (3, "X2"): (48, 25, 0), (3, "X3"): (34, 12, 0),
    (1, "X0"): (60, 34, 0), (1, "X1"): (32, 8, 0), (1, "X2"): (47, 25, 1), (1, "X3"): (36, 15, 0),
    (0, "X0"): (75, 49, 0), (0, "X1"): (46, 21, 0), (0, "X2"): (52, 33, 3), (0, "X3"): (21, 1, 0),
}

MODULI_DIM = 26

# moduli of Kronecker modules: (n, a, b) -> dimension
KRONECKER = {(3, 2, 3): 6, (3, 5, 5): 26}

# dual space of M(5, chi) under the canonical twist
DUAL_SPACE = {3: 2, 1: 4, 0: 0, 2: 3, 4: 1}

# matrices displayed as non-injective counterexamples: (source, target, rows)
NOT_INJECTIVE = [
    ((-2, -2, -1), (0, 0, 0), ["x*y , x^2 , 0", "x*z , 0 , x", "0 , -x*z , y"]),
    ((-2, -2, -1, -1), (-1, 0, 0, 0),
     ["y , x , 0 , 0", "0 , y^2 , x , 0", "0 , y*z , 0 , x", "0 , 0 , -z , y"]),
    ((-3, -2, -1), (-1, 0, 0), ["x^2 - y^2 , x , 0", "x*z^2 , z^2 , y", "y*z^2 , 0 , x"]),
    ((-3, -3, -1), (-2, 0, 0), ["x , y , 0", "z^3 , 0 , y", "0 , z^3 , -x"]),
]

# O_C(1) for a smooth quintic C: h0 and h1 of twists m = -1, 0, 1
QUINTIC_H0 = {-1: 1, 0: 3, 1: 6}
QUINTIC_H1 = {-1: 6, 0: 3, 1: 1}
