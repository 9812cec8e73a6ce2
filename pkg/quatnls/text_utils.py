import math


def format_real(value: float) -> str:
    """Shortest round-trip decimal for a float; NaN is written as ``nan``."""
    value = float(value)
    if math.isnan(value):
        return "nan"
    return repr(value)


def format_complex(value: complex) -> str:
    """Render a complex number as ``re+imj`` using round-trip decimals."""
    value = complex(value)
    sign = "-" if math.copysign(1.0, value.imag) < 0 else "+"
    return f"{format_real(value.real)}{sign}{format_real(abs(value.imag))}j"


def format_verdict(passed: bool) -> str:
    """PASS / FAIL label used in reports."""
    return "PASS" if passed else "FAIL"
