"""Built-in scheme catalog.

Rational schemes carry the exact backend; the two constructed families use
floats (their entries involve sqrt(2)).  The order-2 WSO-1 SDIRK is the
comparison scheme for the order-reduction exhibit: its amplification factor
at z = -10 is exactly 1, so semi-stiff local errors accumulate instead of
being damped and the global order drops to the WSO.
"""

from __future__ import annotations

import math
from fractions import Fraction as F

from .construct import build_wso3_p2_s2, build_wso3_p3_s3
from .tableau import make_tableau


def _backward_euler():
    return make_tableau(
        [[F(1)]], [F(1)], name="backward-euler", source="classic", exact=True
    )


def _implicit_midpoint():
    return make_tableau(
        [[F(1, 2)]], [F(1)], name="implicit-midpoint", source="classic", exact=True
    )


def _trapezoidal():
    return make_tableau(
        [[F(0), F(0)], [F(1, 2), F(1, 2)]],
        [F(1, 2), F(1, 2)],
        name="trapezoidal",
        source="classic",
        exact=True,
    )


def _gauss2():
    r3 = math.sqrt(3.0)
    return make_tableau(
        [[0.25, 0.25 - r3 / 6.0], [0.25 + r3 / 6.0, 0.25]],
        [0.5, 0.5],
        name="gauss2",
        source="two-stage Gauss collocation",
        exact=False,
    )


def _sdirk2_wso1():
    # order 2, stage order 1, WSO 1; R(-10) = 1 exactly
    return make_tableau(
        [[F(1, 5), F(0)], [F(3, 5), F(1, 5)]],
        [F(1, 2), F(1, 2)],
        name="sdirk2-wso1",
        source="order-2 SDIRK comparison scheme",
        exact=True,
    )


_BUILDERS = {
    "backward-euler": _backward_euler,
    "implicit-midpoint": _implicit_midpoint,
    "trapezoidal": _trapezoidal,
    "gauss2": _gauss2,
    "sdirk2-wso1": _sdirk2_wso1,
    "wso3-p2-s2-minus": lambda: build_wso3_p2_s2("minus"),
    "wso3-p2-s2-plus": lambda: build_wso3_p2_s2("plus"),
    "wso3-p3-s3-a0.5-minus": lambda: build_wso3_p3_s3(0.5, "minus"),
    "wso3-p3-s3-a0.5-plus": lambda: build_wso3_p3_s3(0.5, "plus"),
}


def catalog_names():
    return list(_BUILDERS)


def catalog_scheme(name):
    try:
        builder = _BUILDERS[name]
    except KeyError:
        raise KeyError(
            f"unknown catalog scheme {name!r}; available: {', '.join(_BUILDERS)}"
        ) from None
    return builder()


def catalog_all():
    return [catalog_scheme(name) for name in catalog_names()]
