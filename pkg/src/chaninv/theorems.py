"""Numerical embodiment of the preservation theorems for channel inverses.

Each check runs on concrete instances and returns a TheoremReport whose
verdict is empirical: "verified" means every instance met its tolerance,
"falsified" means a genuine counterexample/witness was produced (which is
the *expected* outcome for the two negative results: CP loss under
inversion, and Moore-Penrose breaking trace preservation on non-unital
channels), and "inconclusive" means the hypotheses were not met or no
instances ran.

Facts exercised here, all certified by residuals rather than assumed:

* the Drazin inverse of a trace-preserving map is trace preserving, and of
  a unital map is unital;
* the same holds for dagger-Drazin and Moore-Penrose inverses of maps that
  are both TP and unital;
* complete positivity is generally lost: the depolarizing family D_a
  (rho -> (1-a) rho + (a/d) Tr(rho) I) has Drazin inverse D_{a/(a-1)} for
  a != 1, which leaves the CP region;
* the Moore-Penrose inverse of an *invertible* TP map is always TP (it is
  the true inverse), so MP-TP violations require singular non-unital
  channels; the search therefore samples rank-deficient measure-and-prepare
  channels alongside generic ones;
* inverses propagate through commuting squares, sum over orthogonal
  families, and fix block-dephasing (projector) channels.
"""

from dataclasses import dataclass

import numpy as np

from . import channels as chn
from .ginv import dagger_drazin, drazin_index, drazin_inverse, mp_inverse
from .linalg import DEFAULT_TOL, Tolerances, as_cmatrix, dagger, fro_dist

VERIFIED = "verified"
FALSIFIED = "falsified"
INCONCLUSIVE = "inconclusive"

# Items whose expected suite outcome is a found counterexample.
NEGATIVE_RESULT_IDS = frozenset({"depolarizing-cp-loss", "mp-tp-violation-search"})

DEFAULT_SUITE_SEED = 7
DEFAULT_SUITE_COUNT = 200

# Instance streams reject draws whose smallest above-cutoff singular value
# falls under this fraction of the largest: past that point the absolute
# 1e-8 residual certificates drown in double-precision evaluation noise
# (the residual of W S W - W floats at eps * |W|^2 * |S|), so such draws
# can certify nothing either way.
MIN_REL_SIGMA = 1e-2


@dataclass(frozen=True)
class TheoremReport:
    theorem_id: str
    instances: int
    max_residual: float
    verdict: str
    witness: dict | None = None


def report_to_dict(report: TheoremReport) -> dict:
    return {
        "theorem_id": report.theorem_id,
        "instances": report.instances,
        "max_residual": report.max_residual,
        "verdict": report.verdict,
        "witness": report.witness,
    }


def suite_passed(reports) -> bool:
    """True when every preservation item verified and both searches found witnesses."""
    if not reports:
        return False
    for r in reports:
        if r.theorem_id in NEGATIVE_RESULT_IDS:
            if r.verdict != FALSIFIED or r.witness is None:
                return False
        elif r.verdict != VERIFIED:
            return False
    return True


def _inverse_channel(ch: chn.Channel, inverse: np.ndarray) -> chn.Channel:
    return chn.Channel(d_in=ch.d_out, d_out=ch.d_in, super=inverse)


def _certifiable(s: np.ndarray, tol: Tolerances) -> bool:
    """True when the nonzero part of the spectrum keeps inverses at O(1) scale."""
    sv = np.linalg.svd(s, compute_uv=False)
    if sv.size == 0 or sv[0] == 0.0:
        return True
    nonzero = sv[sv > tol.rank_rtol * max(s.shape) * sv[0]]
    return bool(nonzero.size == 0 or nonzero[-1] / sv[0] >= MIN_REL_SIGMA)


def draw_cptp(d: int, env_dim: int, rng, tol: Tolerances = DEFAULT_TOL) -> chn.Channel:
    """Random CPTP test instance, redrawn while numerically uncertifiable."""
    for _ in range(64):
        ch = chn.random_cptp(d, d, env_dim, rng)
        if _certifiable(ch.super, tol):
            return ch
    return ch


def draw_ucptp(d: int, n_unitaries: int, rng, tol: Tolerances = DEFAULT_TOL) -> chn.Channel:
    """Random mixed-unitary test instance, redrawn while numerically uncertifiable."""
    for _ in range(64):
        ch = chn.random_ucptp(d, n_unitaries, rng)
        if _certifiable(ch.super, tol):
            return ch
    return ch


def check_drazin_preserves_tp_u(ch: chn.Channel, tol: Tolerances = DEFAULT_TOL) -> TheoremReport:
    """TP and/or unitality of a square channel survive Drazin inversion.

    Inconclusive when the channel is neither TP nor unital (empty
    hypothesis); numeric failures from the inverse computation propagate.
    """
    if ch.d_in != ch.d_out:
        raise ValueError("Drazin inversion needs d_in == d_out")
    tp_in, _ = chn.is_tp(ch, tol)
    u_in, _ = chn.is_unital(ch, tol)
    if not tp_in and not u_in:
        return TheoremReport("drazin-tp-u-preservation", 1, 0.0, INCONCLUSIVE)
    dr = drazin_inverse(ch.super, tol)
    inv_ch = _inverse_channel(ch, dr.inverse)
    residuals = []
    if tp_in:
        residuals.append(chn.is_tp(inv_ch, tol)[1])
    if u_in:
        residuals.append(chn.is_unital(inv_ch, tol)[1])
    worst = max(residuals)
    ok = worst <= tol.residual_atol
    return TheoremReport(
        "drazin-tp-u-preservation",
        1,
        worst,
        VERIFIED if ok else FALSIFIED,
        None if ok else chn.channel_to_dict(inv_ch),
    )


def check_drazin_cp_loss(d: int, a: float, tol: Tolerances = DEFAULT_TOL) -> TheoremReport:
    """Depolarizing case study: the Drazin inverse stays TP+unital, loses CP.

    Verifies the closed form: D_a is invertible for a != 1 with Drazin
    inverse D_{a/(a-1)} (D_1 is idempotent and self-inverse), the inverse is
    TP and unital, and its minimum Choi eigenvalue matches
    min((1-b)d + b/d, b/d) for b the inverse parameter. Verdict "falsified"
    (CP lost, with the inverse channel as witness) whenever b leaves the CP
    region, "verified" when the inverse stays CP (a = 1).
    """
    if a == 0:
        raise ValueError("a = 0 is the identity channel; pick a nonzero parameter")
    b = 1.0 if a == 1 else a / (a - 1.0)
    source = chn.depolarizing(d, a)
    dr = drazin_inverse(source.super, tol)
    inv_ch = _inverse_channel(source, dr.inverse)
    r_identity = fro_dist(dr.inverse, chn.depolarizing(d, b).super)
    report = chn.property_report(inv_ch, tol)
    predicted_min = min((1.0 - b) * d + b / d, b / d)
    prediction_gap = abs(report.min_choi_eigenvalue - predicted_min)
    cp_loss_expected = predicted_min < -tol.psd_atol
    consistent = (
        r_identity <= tol.residual_atol
        and report.tp
        and report.unital
        and prediction_gap <= tol.residual_atol
        and (not report.cp) == cp_loss_expected
    )
    worst = max(r_identity, report.tp_residual, report.unital_residual, prediction_gap)
    if not consistent:
        return TheoremReport("depolarizing-cp-loss", 1, worst, INCONCLUSIVE)
    if cp_loss_expected:
        return TheoremReport("depolarizing-cp-loss", 1, worst, FALSIFIED, chn.channel_to_dict(inv_ch))
    return TheoremReport("depolarizing-cp-loss", 1, worst, VERIFIED)


def check_intertwiner_propagation(
    f: np.ndarray,
    g: np.ndarray,
    k: np.ndarray,
    variant: str,
    tol: Tolerances = DEFAULT_TOL,
    h: np.ndarray | None = None,
) -> TheoremReport:
    """Commuting squares propagate to the inverses.

    For ``variant="drazin"`` (f, g square, one intertwiner k): if
    K F = G K then K F^D = G^D K. For ``variant="dagger_drazin"`` the
    hypotheses are the two squares K F = G H and H F^H = G^H K (h defaults
    to k), and the conclusions are H F^p = G^p K and
    K (F^p)^H = (G^p)^H H for the dagger-Drazin inverses. Non-commuting
    inputs give an inconclusive verdict rather than an error.
    """
    f = as_cmatrix(f, "f")
    g = as_cmatrix(g, "g")
    k = as_cmatrix(k, "k")
    if variant == "drazin":
        theorem_id = "intertwiner-drazin"
        input_res = fro_dist(k @ f, g @ k)
        if input_res > tol.residual_atol:
            return TheoremReport(theorem_id, 1, input_res, INCONCLUSIVE)
        fd = drazin_inverse(f, tol).inverse
        gd = drazin_inverse(g, tol).inverse
        out_res = fro_dist(k @ fd, gd @ k)
    elif variant == "dagger_drazin":
        theorem_id = "intertwiner-dagger-drazin"
        h = k if h is None else as_cmatrix(h, "h")
        input_res = max(fro_dist(k @ f, g @ h), fro_dist(h @ dagger(f), dagger(g) @ k))
        if input_res > tol.residual_atol:
            return TheoremReport(theorem_id, 1, input_res, INCONCLUSIVE)
        fp = dagger_drazin(f, tol).inverse
        gp = dagger_drazin(g, tol).inverse
        out_res = max(fro_dist(h @ fp, gp @ k), fro_dist(k @ dagger(fp), dagger(gp) @ h))
    else:
        raise ValueError(f"unknown variant {variant!r}")
    ok = out_res <= tol.residual_atol
    return TheoremReport(theorem_id, 1, out_res, VERIFIED if ok else FALSIFIED)


def check_dagger_drazin_preserves_tpu(ch: chn.Channel, tol: Tolerances = DEFAULT_TOL) -> TheoremReport:
    """TP + unitality survive dagger-Drazin inversion (square or not)."""
    tp_in, _ = chn.is_tp(ch, tol)
    u_in, _ = chn.is_unital(ch, tol)
    if not (tp_in and u_in):
        return TheoremReport("dagger-drazin-tp-u-preservation", 1, 0.0, INCONCLUSIVE)
    dd = dagger_drazin(ch.super, tol)
    inv_ch = _inverse_channel(ch, dd.inverse)
    worst = max(chn.is_tp(inv_ch, tol)[1], chn.is_unital(inv_ch, tol)[1])
    ok = worst <= tol.residual_atol
    return TheoremReport(
        "dagger-drazin-tp-u-preservation",
        1,
        worst,
        VERIFIED if ok else FALSIFIED,
        None if ok else chn.channel_to_dict(inv_ch),
    )


def check_mp_tpu_iff(ch: chn.Channel, tol: Tolerances = DEFAULT_TOL) -> TheoremReport:
    """A map is TP and unital iff its Moore-Penrose inverse is.

    Both directions are evaluated on the instance; an instance where
    neither side is TP+unital satisfies the biconditional vacuously.
    """
    mp = mp_inverse(ch.super, tol)
    inv_ch = _inverse_channel(ch, mp.inverse)
    fwd_tp, fwd_u = chn.is_tp(ch, tol)[0], chn.is_unital(ch, tol)[0]
    bwd_tp, bwd_u = chn.is_tp(inv_ch, tol)[0], chn.is_unital(inv_ch, tol)[0]
    residuals = [0.0]
    if fwd_tp and fwd_u:
        residuals += [chn.is_tp(inv_ch, tol)[1], chn.is_unital(inv_ch, tol)[1]]
    if bwd_tp and bwd_u:
        residuals += [chn.is_tp(ch, tol)[1], chn.is_unital(ch, tol)[1]]
    ok = (fwd_tp and fwd_u) == (bwd_tp and bwd_u) and max(residuals) <= tol.residual_atol
    return TheoremReport(
        "mp-tp-u-iff",
        1,
        max(residuals),
        VERIFIED if ok else FALSIFIED,
        None if ok else chn.channel_to_dict(inv_ch),
    )


def amplitude_damping(gamma: float) -> chn.Channel:
    """Qubit amplitude damping; non-unital for gamma > 0, singular at gamma = 1."""
    if not 0.0 <= gamma <= 1.0:
        raise ValueError("gamma must lie in [0, 1]")
    k0 = np.array([[1.0, 0.0], [0.0, np.sqrt(1.0 - gamma)]], dtype=np.complex128)
    k1 = np.array([[0.0, np.sqrt(gamma)], [0.0, 0.0]], dtype=np.complex128)
    return chn.kraus_to_channel([k0, k1])


def _measure_prepare_channel(d: int, rng) -> chn.Channel:
    """Rank-deficient CPTP channel: measure a random basis, prepare pure states."""
    basis = chn.haar_unitary(d, rng)
    ops = []
    for i in range(d):
        w = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        w /= np.linalg.norm(w)
        ops.append(np.outer(w, basis[:, i].conj()))
    return chn.kraus_to_channel(ops)


def search_mp_tp_violation(
    d: int,
    env_dim: int,
    trials: int,
    seed,
    tol: Tolerances = DEFAULT_TOL,
) -> TheoremReport:
    """Hunt for non-unital CPTP channels whose Moore-Penrose inverse is not TP.

    An invertible TP superoperator can never violate (its MP inverse is the
    true inverse, which is TP), so besides generic Stinespring draws the
    sampler includes singular measure-and-prepare channels, where the
    violation generically occurs. A fixed amplitude-damping candidate at
    gamma = 0.5 is always evaluated first; being invertible, it preserves TP
    and serves as a negative control. Witness = the first channel whose
    inverse has TP residual above 10x ``residual_atol``. The report is
    empirical evidence, not a proof.
    """
    if trials < 1:
        raise ValueError("at least one trial is required")
    rng = np.random.default_rng(seed) if not isinstance(seed, np.random.Generator) else seed
    evaluated = 0
    worst = 0.0
    witness = None

    def consider(ch: chn.Channel):
        nonlocal evaluated, worst, witness
        mp = mp_inverse(ch.super, tol)
        r = chn.is_tp(_inverse_channel(ch, mp.inverse), tol)[1]
        evaluated += 1
        worst = max(worst, r)
        if witness is None and r > 10.0 * tol.residual_atol:
            witness = chn.channel_to_dict(ch)

    if d == 2:
        consider(amplitude_damping(0.5))
    for i in range(trials):
        for _ in range(8):
            if i % 2 == 0:
                ch = _measure_prepare_channel(d, rng)
            else:
                ch = chn.random_cptp(d, d, env_dim, rng)
            if not chn.is_unital(ch, tol)[0] and _certifiable(ch.super, tol):
                consider(ch)
                break
    if evaluated == 0:
        return TheoremReport("mp-tp-violation-search", 0, 0.0, INCONCLUSIVE)
    verdict = FALSIFIED if witness is not None else VERIFIED
    return TheoremReport("mp-tp-violation-search", evaluated, worst, verdict, witness)


def check_orthogonal_sum(fs, variant: str, tol: Tolerances = DEFAULT_TOL) -> TheoremReport:
    """Inverse of an orthogonal sum is the sum of the inverses.

    Orthogonality hypothesis: ``f_i f_j = 0`` for all i != j for the Drazin
    variant, ``f_j^H f_i = 0`` for the dagger-Drazin and Moore-Penrose
    variants. A violated hypothesis yields an inconclusive verdict.
    """
    kinds = {
        "drazin": lambda m: drazin_inverse(m, tol).inverse,
        "dagger_drazin": lambda m: dagger_drazin(m, tol).inverse,
        "mp": lambda m: mp_inverse(m, tol).inverse,
    }
    if variant not in kinds:
        raise ValueError(f"unknown variant {variant!r}")
    theorem_id = {
        "drazin": "orthogonal-sum-drazin",
        "dagger_drazin": "orthogonal-sum-dagger-drazin",
        "mp": "orthogonal-sum-moore-penrose",
    }[variant]
    mats = [as_cmatrix(f, "summand") for f in fs]
    if not mats:
        raise ValueError("at least one summand is required")
    shape = mats[0].shape
    for m in mats[1:]:
        if m.shape != shape:
            raise ValueError("summands must share one shape")
    orth = 0.0
    for i, fi in enumerate(mats):
        for j, fj in enumerate(mats):
            if i == j:
                continue
            if variant == "drazin":
                orth = max(orth, float(np.linalg.norm(fj @ fi)))
            else:
                orth = max(orth, float(np.linalg.norm(dagger(fj) @ fi)))
    if orth > tol.residual_atol:
        return TheoremReport(theorem_id, 1, orth, INCONCLUSIVE)
    inverse = kinds[variant]
    total = sum(mats[1:], start=mats[0].copy())
    residual = fro_dist(inverse(total), sum(inverse(m) for m in mats))
    ok = residual <= tol.residual_atol
    return TheoremReport(theorem_id, 1, residual, VERIFIED if ok else FALSIFIED)


def check_pure_channel_lemma(f: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> TheoremReport:
    """Conjugation channels: CP always; TP iff isometry; unital iff coisometry."""
    f = as_cmatrix(f, "f")
    ch = chn.conjugation_channel(f)
    report = chn.property_report(ch, tol)
    iso_res = fro_dist(dagger(f) @ f, np.eye(f.shape[1]))
    coiso_res = fro_dist(f @ dagger(f), np.eye(f.shape[0]))
    isometry = iso_res <= tol.residual_atol
    coisometry = coiso_res <= tol.residual_atol
    consistent = (
        report.cp
        and report.tp == isometry
        and report.unital == coisometry
        and (report.cp and report.tp and report.unital) == (isometry and coisometry)
    )
    worst = max(
        abs(min(report.min_choi_eigenvalue, 0.0)),
        report.tp_residual if isometry else 0.0,
        report.unital_residual if coisometry else 0.0,
    )
    return TheoremReport("pure-channel-criteria", 1, worst, VERIFIED if consistent else FALSIFIED)


def check_projector_self_inverse(block_dims, tol: Tolerances = DEFAULT_TOL) -> TheoremReport:
    """Block-dephasing channels are UCPTP and equal all three of their inverses."""
    ch = chn.projector_channel(block_dims)
    report = chn.property_report(ch, tol)
    s = ch.super
    distances = [
        fro_dist(drazin_inverse(s, tol).inverse, s),
        fro_dist(dagger_drazin(s, tol).inverse, s),
        fro_dist(mp_inverse(s, tol).inverse, s),
    ]
    worst = max(distances + [report.tp_residual, report.unital_residual])
    ok = report.cp and report.tp and report.unital and max(distances) <= tol.residual_atol
    return TheoremReport("projector-channel-self-inverse", 1, worst, VERIFIED if ok else FALSIFIED)


def check_group_double_inverse(a: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> TheoremReport:
    """At Drazin index <= 1 the double Drazin inverse recovers the input."""
    a = as_cmatrix(a, "a")
    if drazin_index(a, tol) > 1:
        return TheoremReport("group-double-inverse", 1, 0.0, INCONCLUSIVE)
    first = drazin_inverse(a, tol).inverse
    residual = fro_dist(drazin_inverse(first, tol).inverse, a)
    ok = residual <= tol.residual_atol
    return TheoremReport("group-double-inverse", 1, residual, VERIFIED if ok else FALSIFIED)


def _index2_tp_superoperator(d: int, rng) -> np.ndarray:
    """TP superoperator of Drazin index 2 (nilpotent block on the traceless part)."""
    n = d * d
    v = chn.vec(np.eye(d)) / np.sqrt(d)
    m = np.column_stack([v, rng.standard_normal((n, n - 1)) + 1j * rng.standard_normal((n, n - 1))])
    q, _ = np.linalg.qr(m)
    core = np.zeros((n, n), dtype=np.complex128)
    core[0, 0] = 1.0
    core[1, 2] = 1.0
    return q @ core @ dagger(q)


def check_double_inverse_gap(d: int, seed, tol: Tolerances = DEFAULT_TOL) -> TheoremReport:
    """On TP maps of index >= 2 the double Drazin inverse genuinely differs.

    The preservation theorems cannot be run backwards through f^DD when
    f^DD != f; this exhibits a TP superoperator where the gap is large while
    the Drazin inverse itself is still TP.
    """
    rng = np.random.default_rng(seed) if not isinstance(seed, np.random.Generator) else seed
    s = _index2_tp_superoperator(d, rng)
    tp_res = float(np.linalg.norm(dagger(s) @ chn.vec(np.eye(d)) - chn.vec(np.eye(d))))
    dr = drazin_inverse(s, tol)
    inv_tp_res = float(np.linalg.norm(dagger(dr.inverse) @ chn.vec(np.eye(d)) - chn.vec(np.eye(d))))
    double = drazin_inverse(dr.inverse, tol).inverse
    gap = fro_dist(double, s)
    ok = (
        tp_res <= tol.residual_atol
        and inv_tp_res <= tol.residual_atol
        and dr.index >= 2
        and gap > tol.residual_atol
    )
    return TheoremReport(
        "drazin-double-inverse-gap", 1, max(tp_res, inv_tp_res), VERIFIED if ok else FALSIFIED
    )


def _aggregate(theorem_id: str, reports) -> TheoremReport:
    """Combine per-instance reports; any falsified instance marks the item falsified."""
    if not reports:
        return TheoremReport(theorem_id, 0, 0.0, INCONCLUSIVE)
    instances = sum(r.instances for r in reports)
    worst = max(r.max_residual for r in reports)
    witness = next((r.witness for r in reports if r.witness is not None), None)
    verdicts = [r.verdict for r in reports]
    if INCONCLUSIVE in verdicts:
        verdict = INCONCLUSIVE
    else:
        verdict = FALSIFIED if FALSIFIED in verdicts else VERIFIED
    return TheoremReport(theorem_id, instances, worst, verdict, witness)


def run_suite(
    seed: int = DEFAULT_SUITE_SEED,
    instance_count: int = DEFAULT_SUITE_COUNT,
    tol: Tolerances = DEFAULT_TOL,
) -> list:
    """Run every theorem check over deterministic randomized instances.

    Instance generation derives a private sub-seed per item, so reports are
    reproducible for a fixed seed regardless of item order or scheduling.
    Random channels are redrawn while uncertifiable (see MIN_REL_SIGMA).
    Individual check failures surface as report verdicts, never exceptions.
    ``instance_count = 0`` yields all-inconclusive empty reports.
    """
    children = np.random.SeedSequence(seed).spawn(12)
    rngs = [np.random.default_rng(c) for c in children]
    dims = (2, 3, 4)
    envs = (1, 2, 3, 4)
    reports = []

    def guarded(item_fn, *args, theorem_id: str, **kwargs):
        try:
            return item_fn(*args, **kwargs)
        except Exception as exc:  # report, never throw: suite must complete
            return TheoremReport(theorem_id, 1, float("inf"), INCONCLUSIVE, {"error": str(exc)})

    # Drazin TP preservation on generic CPTP channels.
    batch = []
    for i in range(instance_count):
        ch = draw_cptp(dims[i % 3], envs[i % 4], rngs[0], tol)
        batch.append(guarded(check_drazin_preserves_tp_u, ch, tol, theorem_id="drazin-tp-preservation"))
    reports.append(_aggregate("drazin-tp-preservation", batch))

    # Drazin unitality preservation on mixed-unitary channels.
    batch = []
    for i in range(instance_count):
        ch = draw_ucptp(dims[i % 3], 2 + i % 4, rngs[1], tol)
        batch.append(guarded(check_drazin_preserves_tp_u, ch, tol, theorem_id="drazin-unital-preservation"))
    reports.append(_aggregate("drazin-unital-preservation", batch))

    # Depolarizing case study: inverse parameter identity and CP loss.
    batch = []
    if instance_count > 0:
        for d in (2, 3):
            for a in (0.25, 0.5, 0.9, 1.0):
                batch.append(guarded(check_drazin_cp_loss, d, a, tol, theorem_id="depolarizing-cp-loss"))
    reports.append(_aggregate("depolarizing-cp-loss", batch))

    # Dagger-Drazin TP+U preservation on mixed-unitary channels.
    batch = []
    for i in range(instance_count):
        ch = draw_ucptp(dims[i % 3], 2 + i % 3, rngs[2], tol)
        batch.append(
            guarded(check_dagger_drazin_preserves_tpu, ch, tol, theorem_id="dagger-drazin-tp-u-preservation")
        )
    reports.append(_aggregate("dagger-drazin-tp-u-preservation", batch))

    # Moore-Penrose TP+U biconditional on mixed instances.
    batch = []
    for i in range(instance_count):
        if i % 3 == 2:
            ch = draw_cptp(dims[i % 3], envs[i % 4], rngs[3], tol)
        else:
            ch = draw_ucptp(dims[i % 3], 2 + i % 3, rngs[3], tol)
        batch.append(guarded(check_mp_tpu_iff, ch, tol, theorem_id="mp-tp-u-iff"))
    reports.append(_aggregate("mp-tp-u-iff", batch))

    # Moore-Penrose TP-violation search on non-unital channels.
    if instance_count > 0:
        reports.append(
            guarded(
                search_mp_tp_violation, 2, 3, instance_count, rngs[4], tol,
                theorem_id="mp-tp-violation-search",
            )
        )
    else:
        reports.append(TheoremReport("mp-tp-violation-search", 0, 0.0, INCONCLUSIVE))

    # Orthogonal-sum laws on block-embedded families.
    batches = {"drazin": [], "dagger_drazin": [], "mp": []}
    for i in range(instance_count):
        fs = _block_family(rngs[5], n_blocks=2 + i % 3, nilpotent=(i % 5 == 0))
        for variant, batch in batches.items():
            batch.append(
                guarded(check_orthogonal_sum, fs, variant, tol, theorem_id=f"orthogonal-sum-{variant}")
            )
    reports.append(_aggregate("orthogonal-sum-drazin", batches["drazin"]))
    reports.append(_aggregate("orthogonal-sum-dagger-drazin", batches["dagger_drazin"]))
    reports.append(_aggregate("orthogonal-sum-moore-penrose", batches["mp"]))

    # Projector channels: UCPTP and self-inverse for every kind.
    batch = []
    if instance_count > 0:
        for partition in ((1, 1), (2, 1), (2, 2)):
            batch.append(
                guarded(check_projector_self_inverse, partition, tol, theorem_id="projector-channel-self-inverse")
            )
    reports.append(_aggregate("projector-channel-self-inverse", batch))

    # Pure-channel criteria on unitaries, isometries, and defective maps.
    batch = []
    for i in range(instance_count):
        d = dims[i % 3]
        kind = i % 3
        if kind == 0:
            f = chn.haar_unitary(d, rngs[6])
        elif kind == 1:
            g = rngs[6].standard_normal((d + 1, d)) + 1j * rngs[6].standard_normal((d + 1, d))
            f = np.linalg.qr(g)[0]
        else:
            f = np.diag([1.0] * (d - 1) + [0.0]).astype(np.complex128)
        batch.append(guarded(check_pure_channel_lemma, f, tol, theorem_id="pure-channel-criteria"))
    reports.append(_aggregate("pure-channel-criteria", batch))

    # Intertwiner propagation: block instances plus the TP-functional square.
    def conditioned(rng, size):
        u = chn.haar_unitary(size, rng)
        v = chn.haar_unitary(size, rng)
        return u @ np.diag(rng.uniform(0.5, 2.0, size)).astype(np.complex128) @ v

    dz_batch, dd_batch = [], []
    for i in range(instance_count):
        b = 2 + i % 2
        c = 1 + i % 3
        top = conditioned(rngs[7], b)
        bottom = conditioned(rngs[7], c)
        f = np.block([
            [top, np.zeros((b, c))],
            [np.zeros((c, b)), bottom],
        ]).astype(np.complex128)
        proj = np.hstack([np.eye(b), np.zeros((b, c))]).astype(np.complex128)
        dz_batch.append(
            guarded(check_intertwiner_propagation, f, top, proj, "drazin", tol, theorem_id="intertwiner-drazin")
        )
        dd_batch.append(
            guarded(
                check_intertwiner_propagation, f, top, proj, "dagger_drazin", tol,
                theorem_id="intertwiner-dagger-drazin",
            )
        )
        if i % 4 == 0:
            d = dims[i % 3]
            ch = draw_cptp(d, envs[i % 4], rngs[7], tol)
            trace_row = chn.vec(np.eye(d)).conj()[None, :]
            dz_batch.append(
                guarded(
                    check_intertwiner_propagation,
                    ch.super, np.eye(1, dtype=np.complex128), trace_row, "drazin", tol,
                    theorem_id="intertwiner-drazin",
                )
            )
    reports.append(_aggregate("intertwiner-drazin", dz_batch))
    reports.append(_aggregate("intertwiner-dagger-drazin", dd_batch))

    # Double-inverse law at index <= 1 and its failure at index 2.
    batch = []
    for i in range(instance_count):
        d = dims[i % 3]
        if i % 2 == 0:
            mat = draw_ucptp(d, 2, rngs[8], tol).super
        else:
            mat = chn.projector_channel((d - 1, 1)).super
        batch.append(guarded(check_group_double_inverse, mat, tol, theorem_id="group-double-inverse"))
    reports.append(_aggregate("group-double-inverse", batch))

    batch = []
    for i in range(min(instance_count, 16)):
        batch.append(
            guarded(check_double_inverse_gap, dims[i % 2], rngs[9], tol, theorem_id="drazin-double-inverse-gap")
        )
    reports.append(_aggregate("drazin-double-inverse-gap", batch))

    return reports


def _block_family(rng, n_blocks: int, nilpotent: bool):
    """Square block-diagonal embeddings with pairwise orthogonal supports.

    Blocks carry singular values in [0.5, 2] so every inverse stays at O(1)
    scale, matching the absolute-residual policy; the optional nilpotent
    block exercises Drazin index 2.
    """
    sizes = [int(rng.integers(1, 4)) for _ in range(n_blocks)]
    total = sum(sizes)
    family = []
    offset = 0
    for idx, size in enumerate(sizes):
        u = chn.haar_unitary(size, rng)
        v = chn.haar_unitary(size, rng)
        block = u @ np.diag(rng.uniform(0.5, 2.0, size)).astype(np.complex128) @ v
        if nilpotent and idx == 0 and size >= 2:
            block = np.zeros((size, size), dtype=np.complex128)
            block[0, 1] = 1.0
        f = np.zeros((total, total), dtype=np.complex128)
        f[offset : offset + size, offset : offset + size] = block
        family.append(f)
        offset += size
    return family
