"""End-to-end boundary-divergence audit for a single equation instance.

Runs every stage of the divergence argument against one instance and collects
the results into a plain-dict document plus a per-term trace.  The document
contains no timestamps, no environment echoes, and only deterministically
rendered numbers, so two runs with the same inputs are byte-identical once
serialized with sorted keys.
"""

from __future__ import annotations

import math
from fractions import Fraction

from mpmath import mp

from ._version import __version__
from .convergence import boundary_radius, eta_z
from .errors import DomainError, InputError
from .heun import HeunParams, heun_recurrence, series_limits
from .instances import render_value as _num
from .proofs import (find_proof_constants, minorant_partial,
                     verify_proof_constants)
from .rearrange import (grouped_partial_sum, path_table, path_table_enumerate,
                        table_matches_stream)
from .recurrence import (dominating_series_check, modulus_stream,
                         modulus_system, stream_coefficients)
from .scalars import as_mp, is_exact, log_abs, scalar_abs
from .special import min_index_for_ratio_bound, pochhammer_ratio_lower_bound

DOMINATION_EXACT_CAP = 5000  # exact streams beyond this get the floating tier


def _safe_float(x) -> float:
    try:
        return float(x)
    except (OverflowError, ValueError):
        return math.inf if x > 0 else -math.inf


def _system_exact(system) -> bool:
    return all(is_exact(c) for fn in system.lags
               for c in (*fn.num.coeffs, *fn.den.coeffs))


def run_proof_audit(params: HeunParams, root=0, eps=Fraction(1, 100),
                    N_check: int = 10 ** 5, M: int = 30, m_trunc: int = 2,
                    K=Fraction(1, 2), j_max: int = 64, k_max: int = 4096,
                    prec: int = 256, enum_depth: int = 14,
                    instance_echo: dict | None = None):
    """Audit one Heun instance; returns (document, trace_rows).

    trace_rows carry (n, value_re, value_im, log_mag, term_at_r, partial_sum)
    for the coefficient stream used by the domination stage, evaluated at the
    boundary radius.
    """
    if not (params.is_exact() and is_exact(root)):
        raise InputError("the audit needs rational parameters; its certificates are exact")
    return run_system_audit(
        heun_recurrence(params, root), series_limits(params),
        root_echo=Fraction(root), eps=eps, N_check=N_check, M=M,
        m_trunc=m_trunc, K=K, j_max=j_max, k_max=k_max, prec=prec,
        enum_depth=enum_depth, instance_echo=instance_echo)


def run_system_audit(system, limits, *, root_echo=None, eps=Fraction(1, 100),
                     N_check: int = 10 ** 5, M: int = 30, m_trunc: int = 2,
                     K=Fraction(1, 2), j_max: int = 64, k_max: int = 4096,
                     prec: int = 256, enum_depth: int = 14,
                     instance_echo: dict | None = None):
    """Audit any three-term system with known lag limits; see run_proof_audit."""
    if not (_system_exact(system) and all(is_exact(v) for v in limits)):
        raise InputError("the audit needs rational coefficients; its certificates are exact")
    constants = find_proof_constants(system, eps, N_check)
    reverify = verify_proof_constants(system, constants)

    A, B = limits
    r_closed = boundary_radius((A, B), prec, "closed")
    r_bisect = boundary_radius((A, B), prec, "bisect")
    with mp.workprec(prec):
        r_diff = mp.fabs(r_closed - r_bisect)
        weights = eta_z((A, B), r_closed, prec)
        eta_v, z_v = weights
        eta_plus_z = eta_v + z_v

    h_slot = constants.h_lag2  # the minorant's h2 slot always takes the lag-2 constant
    ratio_rows = []
    ratio_all_hold = True
    for r_idx in (0, 1, 2):
        for i2r in (m_trunc, m_trunc + 3):
            floor = min_index_for_ratio_bound(constants.N, h_slot, r_idx, i2r, prec)
            lhs, rhs, holds = pochhammer_ratio_lower_bound(
                constants.N, h_slot, r_idx, i2r, floor, prec)
            sharp = True
            if floor > 1:
                _, _, below = pochhammer_ratio_lower_bound(
                    constants.N, h_slot, r_idx, i2r, floor - 1, prec)
                sharp = not below
            ratio_all_hold = ratio_all_hold and holds
            ratio_rows.append({
                "r": r_idx, "i2r": i2r, "floor": floor,
                "lhs": _num(lhs, prec), "rhs": _num(rhs, prec),
                "holds": bool(holds), "sharp_below": bool(sharp),
            })

    try:
        mino = minorant_partial(constants.N, h_slot, eta_v, z_v, eps, m_trunc, K,
                                j_max, k_max, prec, allow_divergent=True)
        mino_doc = {
            "w": _num(mino.w, prec),
            "regime": mino.regime,
            "regime_strict": mino.regime_strict,
            "growing": mino.growing,
            "value": _num(mino.value, prec),
            "value_closed": _num(mino.value_closed, prec) if mino.value_closed is not None else None,
            "prefactor": _num(mino.prefactor, prec),
            "j_sum": _num(mino.j_sum, prec),
            "z_tail": _num(mino.z_tail, prec),
            "z_tail_remainder": _num(mino.z_tail_remainder, prec),
            "h2_slot": {"label": constants.h_labels[1], "value": h_slot},
            "m": m_trunc, "K": _num(K, prec), "eps": _num(eps, prec),
        }
        minorant_divergent = mino.regime == "divergent"
    except DomainError as exc:
        mino_doc = {"error": str(exc)}
        minorant_divergent = False

    dom_prec = "exact" if constants.N + M <= DOMINATION_EXACT_CAP else prec
    stream = stream_coefficients(system, constants.N + M + 1, dom_prec)
    dom = dominating_series_check(system, stream, constants.N, M)
    with mp.workprec(prec):
        dom_min_margin = min((as_mp(mg, prec) for mg in dom.margins))

    mod_at_N = modulus_system(system, constants.N)
    tbl = path_table(mod_at_N, M)
    tbl_ok = table_matches_stream(tbl, mod_at_N)
    enum_d = min(enum_depth, M)
    tbl_small = path_table(mod_at_N, enum_d)
    enum_tbl = path_table_enumerate(mod_at_N, enum_d)
    enum_ok = tbl_small.table == enum_tbl.table
    with mp.workprec(prec):
        a_mag = scalar_abs(A, prec)
        b_mag = scalar_abs(B, prec)
        grouped = grouped_partial_sum(tbl, a_mag, b_mag, r_closed)
        cbar = modulus_stream(mod_at_N, M + 1, "exact")
        direct = mp.mpf(0)
        p = mp.mpf(1)
        for v in cbar.values:
            direct += as_mp(v, prec) * p
            p *= r_closed
        regroup_diff = mp.fabs(grouped - direct)

    trace_rows = []
    with mp.workprec(prec):
        rs = r_closed
        partial = mp.mpf(0)
        p = mp.mpf(1)
        for n, v in enumerate(stream.values):
            mv = as_mp(v, prec)
            term = mv * p
            partial += term
            trace_rows.append((
                n,
                _safe_float(mp.re(mv)),
                _safe_float(mp.im(mv)),
                log_abs(v),
                _safe_float(term),
                _safe_float(partial),
            ))
            p *= rs

    verdicts = {
        "constants_verified": bool(constants.verified and reverify.ok),
        "ratio_bound_all_hold": bool(ratio_all_hold),
        "minorant_divergent_regime": bool(minorant_divergent),
        "domination_holds": bool(dom.holds),
        "rearrangement_ok": bool(tbl_ok and enum_ok),
    }
    verdicts["overall"] = all(verdicts.values())

    document = {
        "kind": "proof-audit",
        "version": __version__,
        "precision": prec,
        "instance": instance_echo or {},
        "root": _num(root_echo, prec) if root_echo is not None else None,
        "options": {
            "eps": _num(eps, prec), "N_check": N_check, "M": M,
            "m": m_trunc, "K": _num(K, prec), "j_max": j_max, "k_max": k_max,
            "enum_depth": enum_d,
        },
        "classification": {
            "case": constants.case,
            "h_labels": list(constants.h_labels),
        },
        "constants": {
            "h_lag1": constants.h_lag1,
            "h_lag2": constants.h_lag2,
            "N": constants.N,
            "N_eps": constants.N_eps,
            "last_violation_lag1": constants.last_violation_lag1,
            "last_violation_lag2": constants.last_violation_lag2,
            "cert_valid_from_lag1": constants.cert_lag1.valid_from,
            "cert_valid_from_lag2": constants.cert_lag2.valid_from,
            "verified": constants.verified,
        },
        "reverification": {
            "ok": reverify.ok,
            "window": [reverify.checked_lo, reverify.checked_hi],
            "min_margin_lag1": reverify.min_margin_lag1,
            "min_margin_lag2": reverify.min_margin_lag2,
            "violations": reverify.violations,
            "eps_floor_ok": reverify.eps_floor_ok,
            "ratio_bound_precondition_ok": reverify.ratio_bound_precondition_ok,
            "tail_certified": reverify.tail_certified,
        },
        "boundary": {
            "r_star": _num(r_closed, prec),
            "closed_vs_bisect_diff": _num(r_diff, prec),
            "eta": _num(eta_v, prec),
            "z": _num(z_v, prec),
            "eta_plus_z": _num(eta_plus_z, prec),
        },
        "ratio_bound": ratio_rows,
        "minorant": mino_doc,
        "domination": {
            "N": dom.N, "M": dom.M, "holds": dom.holds,
            "precision": dom_prec if dom_prec == "exact" else int(dom_prec),
            "min_margin": _num(dom_min_margin, prec),
        },
        "rearrangement": {
            "depth": M,
            "table_matches_stream": bool(tbl_ok),
            "enumeration_depth": enum_d,
            "enumeration_matches": bool(enum_ok),
            "regroup_abs_diff": _num(regroup_diff, prec),
        },
        "verdicts": verdicts,
    }
    return document, trace_rows
