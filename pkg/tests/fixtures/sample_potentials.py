"""Potentials and pairs shared across the test suite."""

import math

from besselpairs.core.potentials import (
    Constant,
    IteratedLog,
    Power,
    PowerWeighted,
    Product,
    Scaled,
    Sum,
    XLog,
)

UNIT = Constant(level=1.0)
ZERO = Constant(level=0.0)
INVERSE_SQUARE = Power(exponent=2.0)

# (1 + r^2) and r^2 / (1 + r^2)
GROWING = PowerWeighted(a=1.0, b=1.0, alpha=2.0, beta=1.0, m=0.0)
SATURATING = PowerWeighted(a=1.0, b=1.0, alpha=-2.0, beta=-1.0, m=0.0)

ILOG_1 = IteratedLog(k=1, rho=math.e)
ILOG_2 = IteratedLog(k=2, rho=math.e ** 2)
XLOG_1 = XLog(k=1, D=1.0)

# expression -> model, for the grammar tests
SAMPLE_EXPRESSIONS = {
    "const:1": UNIT,
    "pow:2": INVERSE_SQUARE,
    "pw:a=1,b=1,alpha=2,beta=1,m=0": GROWING,
    "ilog:k=1,rho=e": ILOG_1,
    "xlog:k=1,D=1": XLOG_1,
    "scaled:alpha=2,(pow:2)": Scaled(alpha=2.0, inner=INVERSE_SQUARE),
    "sum(const:1;pow:2)": Sum(members=(UNIT, INVERSE_SQUARE)),
    "prod(const:3;pow:2)": Product(members=(Constant(level=3.0), INVERSE_SQUARE)),
}

# (V, W, n) with closed-form weight ((n-2)/2)^2 on the unit ball
HARDY_PAIRS = [(UNIT, INVERSE_SQUARE, n) for n in (3, 5, 8)]
