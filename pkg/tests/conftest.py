from casimir_cyl import Geometry


def geometry_at(a_nm: float, R_um: float = 100.0, L_um: float = 100.0) -> Geometry:
    """Standard R = L = 100 um cylinder at the given separation."""
    return Geometry(a=a_nm * 1e-9, R=R_um * 1e-6, L=L_um * 1e-6)


def direct_polylog_series(s: float, x: float, terms: int = 2000) -> float:
    """Brute-force partial sum of x^n/n^s; independent oracle for the tests."""
    return float(sum(x**n / n**s for n in range(1, terms + 1)))
