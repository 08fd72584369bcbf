"""Randomized verification campaigns behind the command-line driver.

Each campaign runs a battery of identity checks with deterministic per-trial
seeding and returns check records (name, anchor, trials, skips, max residual,
pass flag).  The anchor names the module invariant a check exercises.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import double as dbl
from . import duality, flows, linalg, system
from .double import DoublePoint
from .errors import PatchBoundary, RS3bError
from .system import Coupling


@dataclass
class CheckRecord:
    name: str
    anchor: str
    trials: int
    skips: int
    max_residual: float
    tol: float

    @property
    def passed(self) -> bool:
        return bool(self.max_residual <= self.tol)

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "anchor": self.anchor,
            "trials": self.trials,
            "skips": self.skips,
            "max_residual": float(self.max_residual),
            "tol": float(self.tol),
            "pass": self.passed,
        }


def trial_rng(seed: int, index: int) -> np.random.Generator:
    """Deterministic per-trial generator so campaigns parallelize reproducibly."""
    return np.random.default_rng([seed, index])


def _record(name, anchor, tol, residuals, skips=0):
    res = float(np.max(residuals)) if len(residuals) else 0.0
    return CheckRecord(name=name, anchor=anchor, trials=len(residuals),
                       skips=skips, max_residual=res, tol=tol)


# ---------------------------------------------------------------------------
# core linear algebra
# ---------------------------------------------------------------------------

def linalg_battery(c: Coupling, seed: int, trials: int) -> list[CheckRecord]:
    n = c.n
    out = []
    res = []
    for i in range(trials):
        rng = trial_rng(seed, i)
        xi = system.sample_local(Coupling(n, 1e-6), rng, margin=1e-3).xi
        res.append(np.abs(linalg.alcove_coordinates(linalg.delta_matrix(xi)) - xi).max())
    out.append(_record("alcove_roundtrip", "alcove-extraction-identity", 1e-10, res))

    res, resc = [], []
    skips = 0
    for i in range(trials):
        rng = trial_rng(seed + 1, i)
        g = linalg.random_special_unitary(n, rng)
        if linalg.alcove_decomposition(g).degenerate:
            skips += 1
            continue
        xi = linalg.alcove_coordinates(g)
        res.append(np.abs(linalg.alcove_coordinates(g.conj().T) - xi[::-1]).max())
        h = linalg.random_special_unitary(n, rng)
        resc.append(np.abs(linalg.alcove_coordinates(h @ g @ h.conj().T) - xi).max())
    out.append(_record("alcove_inverse_reversal", "spectral-reversal-identity",
                       1e-10, res, skips))
    out.append(_record("alcove_conjugation_invariance",
                       "conjugation-invariance", 1e-9, resc, skips))

    res = []
    for i in range(trials):
        rng = trial_rng(seed + 2, i)
        x = linalg.random_su_vector(n, rng)
        norm = linalg.scalar_product(x, x, c.lam)
        res.append(0.0 if norm > 0.0 else 1.0)
    out.append(_record("scalar_product_positive", "positive-definite-pairing",
                       0.0, res))
    return out


# ---------------------------------------------------------------------------
# the double
# ---------------------------------------------------------------------------

def _random_double_point(n, rng):
    return DoublePoint(linalg.random_special_unitary(n, rng),
                       linalg.random_special_unitary(n, rng))


def double_battery(c: Coupling, seed: int, trials: int) -> list[CheckRecord]:
    n = c.n
    out = []
    res_eq, res_rel1, res_rel2, res_mom, res_om = [], [], [], [], []
    for i in range(trials):
        rng = trial_rng(seed + 10, i)
        x = _random_double_point(n, rng)
        g = linalg.random_special_unitary(n, rng)
        res_eq.append(np.abs(dbl.moment(dbl.conjugate(x, g))
                             - g @ dbl.moment(x) @ g.conj().T).max())
        s4 = dbl.sd_map(dbl.sd_map(dbl.sd_map(dbl.sd_map(x))))
        res_rel1.append(s4.close_to(dbl.q_map(x)))
        st = dbl.sd_map(dbl.td_map(x))
        st = dbl.sd_map(dbl.td_map(st))
        st = dbl.sd_map(dbl.td_map(st))
        res_rel2.append(dbl.sd_map(dbl.sd_map(x)).close_to(st))
        zeta = linalg.random_su_vector(n, rng)
        t = dbl.tangent_from_lie(x, linalg.random_su_vector(n, rng),
                                 linalg.random_su_vector(n, rng))
        res_mom.append(dbl.moment_map_identity_residual(x, zeta, t, c.lam))
        t2 = dbl.tangent_from_lie(x, linalg.random_su_vector(n, rng),
                                  linalg.random_su_vector(n, rng))
        val = dbl.omega_eval(t, t2, c.lam)
        res_om.append(max(
            abs(dbl.omega_eval(dbl.sd_pushforward(t), dbl.sd_pushforward(t2), c.lam) - val),
            abs(dbl.omega_eval(dbl.td_pushforward(t), dbl.td_pushforward(t2), c.lam) - val)))
    out.append(_record("moment_equivariance", "moment-map-equivariance", 1e-12, res_eq))
    out.append(_record("s4_equals_q", "mapping-class-relations", 1e-12, res_rel1))
    out.append(_record("s2_equals_st_cubed", "mapping-class-relations", 1e-12, res_rel2))
    out.append(_record("moment_map_identity", "two-form-moment-compatibility",
                       1e-9, res_mom))
    out.append(_record("omega_invariance_st", "two-form-invariance", 1e-9, res_om))

    res_ex = []
    skips = 0
    for i in range(trials):
        rng = trial_rng(seed + 11, i)
        x = _random_double_point(n, rng)
        da = linalg.alcove_decomposition(x.a)
        db = linalg.alcove_decomposition(x.b)
        if da.degenerate or db.degenerate:
            skips += 1
            continue
        sx = dbl.sd_map(x)
        res_ex.append(max(
            np.abs(linalg.alcove_coordinates(sx.b) - da.xi).max(),
            np.abs(linalg.alcove_coordinates(sx.a) - db.xi[::-1]).max()))
    out.append(_record("spectral_exchange_precursor", "generator-exchange-law",
                       1e-10, res_ex, skips))

    res_ab = []
    skips = 0
    for i in range(min(trials, 20)):
        rng = trial_rng(seed + 12, i)
        x = _random_double_point(n, rng)
        if (linalg.alcove_decomposition(x.a).degenerate
                or linalg.alcove_decomposition(x.b).degenerate):
            skips += 1
            continue
        for j in range(1, n):
            for k in range(j + 1, n):
                res_ab.append(abs(dbl.poisson_bracket(
                    dbl.alpha_function(j), dbl.alpha_function(k), x, c.lam)))
                res_ab.append(abs(dbl.poisson_bracket(
                    dbl.beta_function(j), dbl.beta_function(k), x, c.lam)))
    out.append(_record("abelian_spectral_brackets", "abelian-poisson-algebras",
                       1e-8, res_ab, skips))
    return out


# ---------------------------------------------------------------------------
# the compactified system
# ---------------------------------------------------------------------------

def system_battery(c: Coupling, seed: int, trials: int) -> list[CheckRecord]:
    out = []
    res_u, res_h, res_rt, res_gl = [], [], [], []
    for i in range(trials):
        rng = trial_rng(seed + 20, i)
        p = system.sample_local(c, rng)
        lax = system.lax_local(c, p)
        res_u.append(max(linalg.unitarity_defect(lax),
                         abs(np.linalg.det(lax) - 1.0)))
        res_h.append(abs(system.hamiltonian(c, p) - float(np.real(np.trace(lax)))))
        q = system.embed(c, p)
        p2 = system.embed_inverse(c, q)
        res_rt.append(flows.torus_distance(p, p2))
        res_gl.append(np.abs(system.lax_global(c, q) - lax).max())
    out.append(_record("lax_special_unitary", "lax-unitarity", 1e-12, res_u))
    out.append(_record("hamiltonian_matches_trace", "energy-trace-identity",
                       1e-10, res_h))
    out.append(_record("embed_roundtrip", "chart-inverse-pair", 1e-12, res_rt))
    out.append(_record("global_lax_on_patch", "global-local-lax-agreement",
                       1e-10, res_gl))

    res_p, gaps = [], []
    for i in range(trials):
        rng = trial_rng(seed + 21, i)
        q = system.sample_projective(c, rng)
        pos = system.position_map(c, q)
        act = system.action_map(c, q)
        y = c.abs_y
        defect = 0.0
        for v in (pos, act):
            defect = max(defect, max(0.0, y - v.min()),
                         max(0.0, v.sum() - (np.pi - y)))
        res_p.append(defect)
        lax = system.lax_global(c, q)
        phases = np.sort(np.angle(np.linalg.eigvals(lax)))
        cyc = np.diff(np.concatenate([phases, [phases[0] + 2 * np.pi]]))
        gaps.append(cyc.min())
    out.append(_record("polytope_membership", "toric-image-polytope", 1e-9, res_p))
    out.append(CheckRecord(name="global_lax_regular_spectrum",
                           anchor="lax-spectrum-regularity", trials=len(gaps),
                           skips=0, max_residual=-float(np.min(gaps)), tol=0.0))

    res_s = []
    for i in range(min(trials, 200)):
        rng = trial_rng(seed + 22, i)
        p = system.sample_local(c, rng, margin=1e-2)
        res_s.append(embedding_symplectic_residual(c, p, rng))
    out.append(_record("embedding_symplectic", "chart-symplectic-pullback",
                       1e-6, res_s))
    return out


def embedding_symplectic_residual(c: Coupling, p: system.LocalPoint,
                                  rng: np.random.Generator,
                                  step: float = 1e-6) -> float:
    """Finite-difference pullback of the projective form through the chart."""
    m = c.n - 1
    v = rng.standard_normal(2 * m)
    w = rng.standard_normal(2 * m)
    center = system.embed(c, p).u

    def push(vec):
        plus = system.embed(c, system.LocalPoint(p.xi + step * vec[:m],
                                                 p.theta + step * vec[m:]))
        minus = system.embed(c, system.LocalPoint(p.xi - step * vec[:m],
                                                  p.theta - step * vec[m:]))
        return _fd_sphere_tangent(center, plus.u, minus.u, step, c.chi0)

    lhs = system.fs_form(push(v), push(w), c.lam)
    rhs = system.local_form(v, w, c.lam)
    return abs(lhs - rhs)


def _align(u: np.ndarray, ref: np.ndarray) -> np.ndarray:
    """Phase-rotate a sphere representative onto a reference representative."""
    overlap = np.vdot(u, ref)
    return u * (overlap / abs(overlap))


def _fd_sphere_tangent(center, u_plus, u_minus, step, chi0):
    """Central-difference tangent at center, cleaned of phase and radial jitter.

    Representatives are phase-aligned to the center (the vertical direction
    is in the kernel of the form) and the O(step) radial component of the
    chord is projected out, since it is not annihilated by the form.
    """
    chord = (_align(u_plus, center) - _align(u_minus, center)) / (2.0 * step)
    return system.sphere_tangent(center, chord, chi0)


# ---------------------------------------------------------------------------
# duality
# ---------------------------------------------------------------------------

def duality_battery(c: Coupling, seed: int, trials: int) -> list[CheckRecord]:
    out = []
    res_mu, res_xb, res_xa = [], [], []
    for i in range(trials):
        rng = trial_rng(seed + 30, i)
        q = system.sample_dense_patch(c, rng)
        x = duality.f0_map(c, q)
        res_mu.append(np.abs(dbl.moment(x.point) - x.mu0).max())
        res_xb.append(np.abs(linalg.alcove_coordinates(x.point.b)
                             - system.position_map(c, q)).max())
        res_xa.append(np.abs(linalg.alcove_coordinates(x.point.a)
                             - system.action_map(c, q)).max())
    out.append(_record("gauge_section_constraint", "moment-level-set", 1e-10, res_mu))
    out.append(_record("section_position_spectrum", "position-spectral-identity",
                       1e-10, res_xb))
    out.append(_record("section_action_spectrum", "action-spectral-identity",
                       1e-10, res_xa))

    res_ex, res_s4, res_rel, res_r = [], [], [], []
    skips = 0
    for i in range(trials):
        rng = trial_rng(seed + 31, i)
        q = system.sample_dense_patch(c, rng)
        try:
            sq = duality.duality_map(c, q)
            res_ex.append(max(
                np.abs(system.position_map(c, sq) - system.action_map(c, q)).max(),
                np.abs(system.action_map(c, sq)
                       - system.position_map(c, q)[::-1]).max()))
            if i < max(trials // 5, 20):
                s2 = duality.duality_map(c, sq)
                s4 = duality.duality_map(c, duality.duality_map(c, s2))
                res_s4.append(system.proj_distance(s4, q))
                cur = q
                for _ in range(3):
                    cur = duality.duality_map(c, duality.dehn_twist_map(c, cur))
                res_rel.append(system.proj_distance(cur, s2))
                rq = duality.involution_r(c, q)
                res_r.append(max(
                    system.proj_distance(duality.involution_r(c, rq), q),
                    np.abs(system.position_map(c, rq)
                           - system.action_map(c, q)).max(),
                    np.abs(system.action_map(c, rq)
                           - system.position_map(c, q)).max()))
        except (PatchBoundary, RS3bError):
            skips += 1
    out.append(_record("duality_exchange", "position-action-exchange",
                       1e-8, res_ex, skips))
    out.append(_record("duality_order_four", "reduced-mapping-class-relations",
                       1e-6, res_s4, skips))
    out.append(_record("st_cubed_is_s2", "reduced-mapping-class-relations",
                       1e-6, res_rel, skips))
    out.append(_record("involution_r", "anti-symplectic-involution",
                       1e-7, res_r, skips))

    res_f0, res_s, res_ra = [], [], []
    skips = 0
    for i in range(min(trials, 100)):
        rng = trial_rng(seed + 32, i)
        p = system.sample_local(c, rng, margin=1e-2)
        try:
            a, b, rr = map_symplectic_residuals(c, p, rng)
            res_f0.append(a)
            res_s.append(b)
            res_ra.append(rr)
        except (PatchBoundary, RS3bError):
            skips += 1
    out.append(_record("gauge_section_symplectic", "section-symplectic-pullback",
                       1e-6, res_f0, skips))
    out.append(_record("duality_symplectic", "duality-symplectic-pullback",
                       1e-6, res_s, skips))
    out.append(_record("involution_antisymplectic", "anti-symplectic-pullback",
                       1e-6, res_ra, skips))
    return out


def map_symplectic_residuals(c: Coupling, p: system.LocalPoint,
                             rng: np.random.Generator, step: float = 1e-6):
    """Finite-difference pullback residuals for f0, the duality map, and R."""
    m = c.n - 1
    v = rng.standard_normal(2 * m)
    w = rng.standard_normal(2 * m)

    def curve(vec, s):
        return system.embed(c, system.LocalPoint(p.xi + s * vec[:m],
                                                 p.theta + s * vec[m:]))

    base = duality.f0_map(c, curve(v, 0.0)).point
    center = curve(v, 0.0).u
    s_center = duality.duality_map(c, curve(v, 0.0)).u
    r_center = duality.involution_r(c, curve(v, 0.0)).u

    def push_double(vec):
        xp = duality.f0_map(c, curve(vec, step)).point
        xm = duality.f0_map(c, curve(vec, -step)).point
        va = (xp.a - xm.a) / (2 * step)
        vb = (xp.b - xm.b) / (2 * step)
        # project the chords onto the unitary-group tangent spaces at the base
        va = base.a @ linalg.project_su(base.a.conj().T @ va)
        vb = base.b @ linalg.project_su(base.b.conj().T @ vb)
        return dbl.DoubleTangent(base, va, vb)

    def push_map(vec, mapping, ref):
        qp = mapping(c, curve(vec, step))
        qm = mapping(c, curve(vec, -step))
        return _fd_sphere_tangent(ref, qp.u, qm.u, step, c.chi0)

    def sphere_tan(vec):
        return _fd_sphere_tangent(center, curve(vec, step).u,
                                  curve(vec, -step).u, step, c.chi0)

    fs = system.fs_form(sphere_tan(v), sphere_tan(w), c.lam)
    tv, tw = push_double(v), push_double(w)
    res_f0 = abs(dbl.omega_eval(tv, tw, c.lam) - fs)
    res_s = abs(system.fs_form(push_map(v, duality.duality_map, s_center),
                               push_map(w, duality.duality_map, s_center),
                               c.lam) - fs)
    res_r = abs(system.fs_form(push_map(v, duality.involution_r, r_center),
                               push_map(w, duality.involution_r, r_center),
                               c.lam) + fs)
    return res_f0, res_s, res_r


# ---------------------------------------------------------------------------
# flows
# ---------------------------------------------------------------------------

def flows_battery(c: Coupling, seed: int, trials: int) -> list[CheckRecord]:
    out = []
    res_br, res_cons, res_per = [], [], []
    skips = 0
    for i in range(min(trials, 3)):
        rng = trial_rng(seed + 40, i)
        p0 = system.sample_local(c, rng, margin=0.1)
        rep = flows.verify_action_angle(c, p0)
        res_br.append(max(rep["action_bracket_max"], rep["mixed_bracket_max"],
                          rep["position_bracket_max"]))
        res_cons.append(rep["conservation_max"])
        res_per.append(rep["periodicity_max"])
        skips += rep["skips"]
    out.append(_record("involution_brackets", "action-involutivity", 1e-6, res_br))
    out.append(_record("action_conservation", "energy-flow-conservation",
                       1e-7, res_cons, skips))
    out.append(_record("action_flow_periodicity", "action-flow-period",
                       1e-6, res_per, skips))
    return out


def full_battery(c: Coupling, seed: int, trials: int) -> list[CheckRecord]:
    return (linalg_battery(c, seed, trials)
            + double_battery(c, seed, max(trials // 5, 20))
            + system_battery(c, seed, trials)
            + duality_battery(c, seed, trials)
            + flows_battery(c, seed, trials))
