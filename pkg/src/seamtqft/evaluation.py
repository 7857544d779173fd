"""The two closed-surface evaluations.

A colored surface contributes a signed monomial over a power of the root
difference; the full evaluation sums over checkerboard colorings, always
lands in the symmetric subring, and is returned as an exact polynomial in
E1, E2 (never a rational function: failed denominator clearing is an
internal error, since polynomiality is guaranteed).  The Gaussian variant
rescales by an inverse power of w per seam.

Evaluation runs per connected component and multiplies the results; the
single sum over colorings of the whole surface, and the alternative sign
convention obtained by closing up the color-2 part instead, are retained
as cross-check oracles behind the `cross_check` flag.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import surface as sf
from .poly import (
    ALPHA_VARS,
    LocPoly,
    NonDivisible,
    Poly,
    alpha1,
    alpha2,
    alpha_diff,
    exact_divide,
    homogeneous_degree,
    is_symmetric,
    omega_power,
    swap_roots,
    to_elementary,
)


class EvaluationError(Exception):
    pass


class InadmissibleColoring(EvaluationError):
    pass


@dataclass(frozen=True)
class EvalResult:
    value: Poly  # over E1, E2; Gaussian coefficients in omega mode
    degree: int  # -chi + 2*dots; the value is homogeneous of this degree (or zero)

    def __eq__(self, other):
        if isinstance(other, EvalResult):
            return self.value == other.value and self.degree == other.degree
        return self.value == other


def _signed_term(sign_exp, d1, d2, chi, gauss=False):
    sign = 1 if sign_exp % 2 == 0 else -1
    num = sign * alpha1(gauss) ** d1 * alpha2(gauss) ** d2
    return LocPoly(num, alpha_diff(gauss), chi // 2)


def eval_colored(surface, coloring):
    """The contribution of one checkerboard coloring, over the root ring
    localized at a2 - a1.  A negative half-Euler-characteristic means
    multiplication by the corresponding power of the binomial."""
    try:
        stats = sf.coloring_stats(surface, coloring)
    except sf.SurfaceError as exc:
        raise InadmissibleColoring(str(exc)) from exc
    chi = sf.euler_characteristic(surface)
    s = stats.theta1 + stats.chi_f1_closed // 2
    return _signed_term(s, stats.d1, stats.d2, chi)


def eval_colored_alt(surface, coloring):
    """Alternative sign convention: count color-2 seams, close up the
    color-2 part, divide by the opposite binomial.  Agrees with
    eval_colored coloring by coloring (debug cross-check)."""
    stats = sf.coloring_stats(surface, coloring)
    chi = sf.euler_characteristic(surface)
    chi_f2_closed = (chi - stats.chi_f1) + surface.theta
    s = stats.theta2 + chi_f2_closed // 2
    half = chi // 2
    # (a1 - a2)^half = (-1)^half (a2 - a1)^half
    return _signed_term(s + half, stats.d1, stats.d2, chi)


def _component_value(surface, comp):
    """Sum of colored terms of one component, cleared and symmetrized."""
    sub = _restrict(surface, comp)
    total = LocPoly(Poly.zero(ALPHA_VARS), alpha_diff(), 0)
    for coloring in sf.admissible_colorings(sub):
        total = total + eval_colored(sub, coloring)
    return _clear_and_symmetrize(total)


def _restrict(surface, comp):
    index = {f: i for i, f in enumerate(comp)}
    facets = [surface.facets[f] for f in comp]
    seams = [
        sf.Seam((index[s.a[0]], s.a[1]), (index[s.b[0]], s.b[1]), s.prefer)
        for s in surface.seams
        if s.a[0] in index
    ]
    return sf.ClosedSeamedSurface(tuple(facets), tuple(seams))


def _clear_and_symmetrize(total):
    if total.is_zero():
        return Poly.zero(ALPHA_VARS)
    num = total.num
    for _ in range(total.power):
        num = exact_divide(num, total.base)  # polynomiality guarantee
    assert num == swap_roots(num), "evaluation produced a non-symmetric polynomial"
    return num


def evaluate(surface, omega=False, cross_check=False):
    """Evaluate a closed seamed surface.

    Plain mode returns an integer-coefficient polynomial in E1, E2; omega
    mode rescales by the inverse w-power of the seam count and returns
    Gaussian coefficients.  With cross_check, the per-component product is
    compared against the one-sum-over-all-colorings oracle and against the
    alternative sign convention.
    """
    errors = sf.validate(surface)
    if errors:
        raise sf.SurfaceError(errors[0][0], "invalid surface")
    value_alpha = Poly.const(ALPHA_VARS, 1)
    for comp in sf.components(surface):
        value_alpha = value_alpha * _component_value(surface, comp)
        if value_alpha.is_zero():
            break
    if cross_check:
        _run_cross_checks(surface, value_alpha)
    value = to_elementary(value_alpha)
    deg = sf.degree(surface)
    if not value.is_zero():
        assert homogeneous_degree(value) == deg, "degree mismatch against -chi + 2*dots"
    if omega:
        value = value.to_gauss() * Poly.const(
            value.vars, omega_power(-surface.theta), gauss=True
        )
    return EvalResult(value, deg)


def eval_omega(surface, cross_check=False):
    return evaluate(surface, omega=True, cross_check=cross_check)


def _run_cross_checks(surface, value_alpha):
    total = LocPoly(Poly.zero(ALPHA_VARS), alpha_diff(), 0)
    total_alt = LocPoly(Poly.zero(ALPHA_VARS), alpha_diff(), 0)
    for coloring in sf.admissible_colorings(surface):
        term = eval_colored(surface, coloring)
        alt = eval_colored_alt(surface, coloring)
        assert term == alt, "sign conventions disagree on a coloring"
        total = total + term
        total_alt = total_alt + alt
    assert _clear_and_symmetrize(total) == value_alpha, (
        "componentwise product disagrees with the global coloring sum"
    )
    assert _clear_and_symmetrize(total_alt) == value_alpha
