"""Insecurity scenarios and a checker for collective-attack strategies.

A collective attack maps each joint input state to

    U |in_xy> |e> |0>_M = sum_z sqrt(p(z|x,y)) |Gamma_xyz> |z>_M

and is physical only if it preserves inner products between inputs. The
scenarios here show statistics that honest BB84 senders would also produce
while Eve learns the basis-0 key.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from . import bound
from .qstate import (
    KET0,
    KET1,
    BellLabel,
    EncodingSet,
    bb84_encoding,
    bell_vector,
    inner_product,
    tensor,
)
from .tables import PAIRS, OutcomeTable, joint_sender_table

TOL = 1e-9

ANNOUNCED_PAIR = (BellLabel.PHI_PLUS, BellLabel.PSI_PLUS)


# -- honest statistics ---------------------------------------------------------


def product_inputs(enc_a: EncodingSet, enc_b: EncodingSet) -> dict:
    return {(x, y): tensor(enc_a[x], enc_b[y]) for x, y in PAIRS}


def honest_table(enc_a: EncodingSet, enc_b: EncodingSet, announced=ANNOUNCED_PAIR) -> OutcomeTable:
    """Lossless relay that announces z = k + 1 on a projection onto ``announced[k]``.

    Projections onto the remaining Bell states count as failures (z = 0).
    """
    if not 1 <= len(announced) <= 2:
        raise ValueError("the relay announces one or two Bell states")
    rows = []
    for x, y in PAIRS:
        state = tensor(enc_a[x], enc_b[y])
        row = [0.0, 0.0, 0.0]
        for k, label in enumerate(announced):
            row[k + 1] = abs(inner_product(bell_vector(label), state)) ** 2
        row[0] = max(0.0, 1.0 - row[1] - row[2])
        rows.append(row)
    return OutcomeTable(rows)


def single_bell_merge(t: OutcomeTable) -> OutcomeTable:
    """Fold the |psi+> announcement into failure, as for a one-Bell-state relay."""
    arr = t.array.copy()
    arr[:, 0] += arr[:, 2]
    arr[:, 2] = 0.0
    return OutcomeTable(arr)


def orthogonal_encoding() -> EncodingSet:
    """phi_0 = phi_2 = |0>, phi_1 = phi_3 = |1>: basis choice changes nothing."""
    return EncodingSet((KET0, KET1, KET0, KET1))


def orthogonal_source_scenario():
    """(Alice's set, Bob's set, observed table) for the orthogonal source and a |phi+>-only relay."""
    enc = orthogonal_encoding()
    observed = honest_table(enc, enc, announced=(BellLabel.PHI_PLUS,))
    return enc, enc, observed


def computational_guess_probability(enc: EncodingSet) -> float:
    """Eve's success at reading each key bit with a {|0>, |1>} measurement.

    Bits are x mod 2 in either basis; the average is over the four states.
    """
    basis = (KET0, KET1)
    total = 0.0
    for x in range(4):
        total += abs(inner_product(basis[x % 2], enc[x])) ** 2
    return total / 4


def degenerate_source_search(announced=ANNOUNCED_PAIR):
    """Look for a source that copies basis 0 into basis 1 yet matches honest statistics.

    Both senders keep phi_0 = |0>, phi_1 = |1> and place phi_2, phi_3 on
    computational states. Such a source leaks every key bit to a
    computational-basis measurement. Returns the first matching
    ``(enc_a, enc_b)`` or ``None``.
    """
    target = honest_table(bb84_encoding(), bb84_encoding(), announced)
    options = [EncodingSet((KET0, KET1, s2, s3)) for s2, s3 in itertools.product((KET0, KET1), repeat=2)]
    for enc_a, enc_b in itertools.product(options, repeat=2):
        if honest_table(enc_a, enc_b, announced).allclose(target, atol=TOL):
            return enc_a, enc_b
    return None


# -- collective-attack strategies ---------------------------------------------


@dataclass
class EveStrategy:
    ancilla_dim: int
    gamma: dict
    probs: dict

    def induced_table(self) -> OutcomeTable:
        rows = [[self.probs[(x, y, z)] for z in range(3)] for x, y in PAIRS]
        return OutcomeTable(rows, validate=False)

    def output(self, pair) -> np.ndarray:
        """Joint Eve (x) message vector sum_z sqrt(p) |Gamma_z>|z>, flattened."""
        x, y = pair
        return np.concatenate(
            [math.sqrt(max(self.probs[(x, y, z)], 0.0)) * self.gamma[(x, y, z)] for z in range(3)]
        )


@dataclass
class StrategyReport:
    violations: list = field(default_factory=list)
    max_inner_product_error: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.violations


def verify_strategy(strategy: EveStrategy, inputs: dict, target: OutcomeTable | None = None, tol: float = TOL) -> StrategyReport:
    """Check unitarity on the inputs, probability normalization, and the announced table."""
    report = StrategyReport()
    pairs = [p for p in PAIRS if p in inputs]
    for x, y in pairs:
        for z in range(3):
            g = np.asarray(strategy.gamma[(x, y, z)])
            if g.shape != (strategy.ancilla_dim,):
                report.violations.append(f"Gamma_{x}{y}{z} has shape {g.shape}")
                continue
            norm = float(np.linalg.norm(g))
            if abs(norm - 1.0) > tol:
                report.violations.append(f"Gamma_{x}{y}{z} has norm {norm:.12g}")
        ps = [strategy.probs[(x, y, z)] for z in range(3)]
        if any(p < -tol or p > 1 + tol for p in ps):
            report.violations.append(f"p(.|{x},{y}) = {ps} has entries outside [0, 1]")
        if abs(sum(ps) - 1.0) > tol:
            report.violations.append(f"p(.|{x},{y}) sums to {sum(ps):.12g}")
    if report.violations:
        return report

    outputs = {p: strategy.output(p) for p in pairs}
    worst = 0.0
    for i, pi in enumerate(pairs):
        for pj in pairs[i:]:
            before = inner_product(inputs[pi], inputs[pj])
            after = inner_product(outputs[pi], outputs[pj])
            err = abs(before - after)
            worst = max(worst, err)
            if err > tol:
                report.violations.append(
                    f"<in_{pi}|in_{pj}> = {before:.6g} but attack gives {after:.6g}"
                )
    report.max_inner_product_error = worst

    if target is not None:
        diff = np.abs(strategy.induced_table().array - target.array)
        if diff.max() > tol:
            report.violations.append(f"announced table differs from target by {diff.max():.3g}")
    return report


def honest_bsm_strategy(enc_a: EncodingSet, enc_b: EncodingSet, ancilla_dim: int = 8) -> EveStrategy:
    """The honest lossless relay written as a collective attack.

    Gamma_xyz is the normalized projection of the input onto the z-th outcome
    subspace (|phi+>, |psi+>, or the span of the other two Bell states),
    embedded in the first four ancilla coordinates.
    """
    projectors = [
        np.outer(bell_vector(b), bell_vector(b).conj())
        for b in (BellLabel.PHI_PLUS, BellLabel.PSI_PLUS)
    ]
    projectors.insert(0, np.eye(4) - projectors[0] - projectors[1])
    filler = np.zeros(ancilla_dim, dtype=complex)
    filler[-1] = 1.0
    gamma, probs = {}, {}
    for x, y in PAIRS:
        state = tensor(enc_a[x], enc_b[y])
        for z, proj in enumerate(projectors):
            v = proj @ state
            p = float(np.vdot(v, v).real)
            probs[(x, y, z)] = p
            g = filler.copy()
            if p > 1e-15:
                g = np.zeros(ancilla_dim, dtype=complex)
                g[:4] = v / math.sqrt(p)
            gamma[(x, y, z)] = g
    return EveStrategy(ancilla_dim, gamma, probs)


def perturb_strategy(strategy: EveStrategy, key, index: int, delta: complex, renormalize: bool = False) -> EveStrategy:
    """Copy of ``strategy`` with one gamma component shifted by ``delta``."""
    gamma = {k: v.copy() for k, v in strategy.gamma.items()}
    g = gamma[key]
    g[index] += delta
    if renormalize:
        g /= np.linalg.norm(g)
    return EveStrategy(strategy.ancilla_dim, gamma, dict(strategy.probs))


# -- four-dimensional joint sender --------------------------------------------


def complete_gram(known: dict, n: int, rank: int, max_iter: int = 10_000, tol: float = 1e-13) -> np.ndarray:
    """Fill unspecified entries of a Hermitian Gram matrix so it is PSD with rank <= ``rank``.

    ``known`` maps (i, j) with i <= j to fixed values; diagonal entries
    default to 1. Alternates between the rank-truncated PSD cone and the
    affine set of fixed entries, starting from zeros in the free slots.
    """
    fixed = np.zeros((n, n), dtype=bool)
    g = np.zeros((n, n), dtype=complex)
    for i in range(n):
        g[i, i] = 1.0
        fixed[i, i] = True
    for (i, j), v in known.items():
        g[i, j] = v
        g[j, i] = np.conj(v)
        fixed[i, j] = fixed[j, i] = True
    target = g.copy()
    for _ in range(max_iter):
        w, q = np.linalg.eigh(g)
        w = np.clip(w, 0.0, None)
        w[: max(0, n - rank)] = 0.0
        psd = (q * w) @ q.conj().T
        nxt = np.where(fixed, target, psd)
        if np.max(np.abs(nxt - psd)) < tol:
            return psd
        g = nxt
    raise RuntimeError("Gram completion did not converge")


def embed_gram(gram: np.ndarray, dim: int) -> np.ndarray:
    """Vectors (as rows) in C^dim whose pairwise inner products reproduce ``gram``."""
    w, q = np.linalg.eigh(gram)
    order = np.argsort(w)[::-1][:dim]
    w = np.clip(w[order], 0.0, None)
    q = q[:, order]
    # Row k is the conjugate of the k-th column factor so <row_i|row_j> = gram[i, j].
    return (q * np.sqrt(w)).conj()


@dataclass
class JointSourceStates:
    states: dict
    overlap: float

    def relations(self) -> list[tuple[str, complex, complex]]:
        """(description, required value, actual value) for every defining relation."""
        s = self.states
        ip = inner_product
        rel = [
            ("<00|11>", 0.0, ip(s[0, 0], s[1, 1])),
            ("<00|01>", self.overlap, ip(s[0, 0], s[0, 1])),
            ("|<01|10>|", 1.0, abs(ip(s[0, 1], s[1, 0]))),
            ("|<22|33>|", 1.0, abs(ip(s[2, 2], s[3, 3]))),
            ("|<22|00+01>| / |00+01|", 1.0, abs(ip(s[2, 2], s[0, 0] + s[0, 1])) / np.linalg.norm(s[0, 0] + s[0, 1])),
            ("|<23|32>|", 1.0, abs(ip(s[2, 3], s[3, 2]))),
        ]
        for other in ((0, 0), (1, 1), (0, 1), (2, 2)):
            rel.append((f"<23|{other[0]}{other[1]}>", 0.0, ip(s[2, 3], s[other])))
        return rel

    def violations(self, tol: float = TOL) -> list[str]:
        return [
            f"{name}: want {want:.6g}, got {got:.6g}"
            for name, want, got in self.relations()
            if abs(got - want) > tol
        ]


def four_dim_counterexample(overlap: float = -0.5, ancilla_dim: int = 8):
    """Joint-sender states and an attack reproducing honest statistics with a leaky key.

    ``overlap`` is <phi_00|phi_01>. Only -1/2 admits an attack that announces
    the honest table: phi_00 and phi_01 share support only on failures
    (amplitude 1/sqrt(2) each), so any attack gives |<phi_00|phi_01>| <= 1/2.
    -1/2 also makes phi_00 + phi_01 a unit vector.
    """
    if ancilla_dim < 6:
        raise ValueError("the attack needs at least six orthogonal ancilla states")
    # Independent states: 0 = phi_00, 1 = phi_11, 2 = phi_01, 3 = phi_23.
    known = {(0, 1): 0.0, (0, 2): overlap, (0, 3): 0.0, (2, 3): 0.0, (1, 3): 0.0}
    gram = complete_gram(known, 4, rank=4)
    vecs = embed_gram(gram, 4)
    phi00, phi11, phi01, phi23 = vecs
    total = phi00 + phi01
    phi22 = total / np.linalg.norm(total)
    states = {
        (0, 0): phi00,
        (1, 1): phi11,
        (0, 1): phi01,
        (1, 0): phi01.copy(),
        (2, 2): phi22,
        (3, 3): phi22.copy(),
        (2, 3): phi23,
        (3, 2): phi23.copy(),
    }
    joint = JointSourceStates(states, overlap)
    bad = joint.violations()
    if bad:
        raise RuntimeError("counterexample construction failed: " + "; ".join(bad))

    e = np.eye(ancilla_dim, dtype=complex)
    unused = e[ancilla_dim - 1]
    fail_00, fail_11, fail_23, key_0, key_1, psi_01 = e[:6]
    table = joint_sender_table()
    gamma = {}
    assign = {
        (0, 0): (fail_00, key_0, unused),
        (1, 1): (fail_11, key_1, unused),
        (0, 1): (-fail_00, unused, psi_01),
        (1, 0): (-fail_00, unused, psi_01),
        (2, 2): (unused, key_0, psi_01),
        (3, 3): (unused, key_0, psi_01),
        (2, 3): (fail_23, unused, unused),
        (3, 2): (fail_23, unused, unused),
    }
    probs = {}
    for pair, vecs3 in assign.items():
        for z, g in enumerate(vecs3):
            gamma[(*pair, z)] = g.copy()
            probs[(*pair, z)] = table.p(z, *pair)
    return joint, EveStrategy(ancilla_dim, gamma, probs)


def max_failure_overlap(strategy_probs: dict, a, b) -> float:
    """Largest |<in_a|in_b>| any attack with these announcement probabilities can reproduce."""
    return sum(math.sqrt(strategy_probs[(*a, z)] * strategy_probs[(*b, z)]) for z in range(3))


def key_overlap(strategy: EveStrategy) -> float:
    """|<Gamma_001|Gamma_111>|; zero means Eve tells the two sifted key values apart."""
    return abs(inner_product(strategy.gamma[(0, 0, 1)], strategy.gamma[(1, 1, 1)]))


def guess_probability(overlap: float) -> float:
    """Optimal (Helstrom) guess of a uniform bit from two pure states with this overlap."""
    return 0.5 * (1.0 + math.sqrt(max(0.0, 1.0 - overlap**2)))


# -- scenario reports ------------------------------------------------------------


def run_four_dim(overlap: float = -0.5) -> dict:
    joint, strategy = four_dim_counterexample(overlap)
    report = verify_strategy(strategy, joint.states, target=joint_sender_table())
    induced = strategy.induced_table()
    match = float(np.max(np.abs(induced.array - joint_sender_table().array)))
    overlap = key_overlap(strategy)
    violations = joint.violations() + report.violations
    return {
        "scenario": "four-dim",
        "overlap_00_01": overlap,
        "table_match": match <= TOL,
        "table_max_abs_diff": match,
        "eve_info": overlap,
        "eve_guess_probability": guess_probability(overlap),
        "gamma_000_plus_gamma_010": float(
            np.linalg.norm(strategy.gamma[(0, 0, 0)] + strategy.gamma[(0, 1, 0)])
        ),
        "max_inner_product_error": report.max_inner_product_error,
        "violations": violations,
        "passed": match <= TOL and overlap <= TOL and not violations,
    }


def run_single_bell(cfg: bound.BoundConfig = bound.BoundConfig()) -> dict:
    enc_a, enc_b, observed = orthogonal_source_scenario()
    honest = single_bell_merge(honest_table(bb84_encoding(), bb84_encoding()))
    indistinguishable = observed.allclose(honest, atol=TOL)
    overlap = abs(inner_product(enc_a[0], enc_a[1]))
    result = bound.key_rate(observed, cfg)
    violations = []
    if not indistinguishable:
        violations.append("orthogonal-source statistics differ from honest single-Bell statistics")
    if not result.degenerate:
        violations.append("bound engine did not flag the degenerate source")
    if result.rate != 0.0:
        violations.append(f"bound engine reports positive rate {result.rate}")
    guess = computational_guess_probability(enc_a)
    if guess != 1.0:
        violations.append(f"computational measurement guesses only {guess}")
    return {
        "scenario": "single-bell",
        "table_match": bool(indistinguishable),
        "indistinguishable": bool(indistinguishable),
        "eve_info": overlap,
        "eve_guess_probability": guess,
        "degenerate": result.degenerate,
        "rate": result.rate,
        "violations": violations,
        "passed": not violations,
    }


SCENARIOS = {"four-dim": run_four_dim, "single-bell": run_single_bell}


def run_scenario(name: str) -> dict:
    try:
        runner = SCENARIOS[name]
    except KeyError:
        raise KeyError(f"unknown scenario {name!r}; choose from {sorted(SCENARIOS)}") from None
    return runner()
