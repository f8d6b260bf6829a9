"""Loss and dark-count model of the relay, in closed form and by event sampling.

The relay has four single-photon detectors. A photon survives the fibre and
clicks with probability p_s = 10**(-0.02 l) * eta; every detector fires a
dark count with probability d per gate. Channel disturbance and optical
misalignment are zero.

Detector click patterns used by the event oracle (pairs of detectors):

    {0,1}, {2,3} -> |phi+> (z = 1)
    {0,2}, {1,3} -> |psi+> (z = 2)
    {0,3}, {1,2} -> failure

Any pattern other than exactly two clicks is a failure.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .tables import PAIR_INDEX, PAIRS, OutcomeTable, from_counts

SHARD_SIZE = 1 << 18


@dataclass(frozen=True)
class DetectorParams:
    """Distance from each sender to the relay (km), detector efficiency, dark-count probability."""

    l_km: float
    eta: float
    d: float

    def __post_init__(self):
        for name in ("l_km", "eta", "d"):
            v = getattr(self, name)
            if not np.isfinite(v):
                raise ValueError(f"{name} must be finite")
        if self.l_km < 0:
            raise ValueError(f"l_km must be >= 0, got {self.l_km}")
        if not 0.0 <= self.eta <= 1.0:
            raise ValueError(f"eta must lie in [0, 1], got {self.eta}")
        if not 0.0 <= self.d <= 1.0:
            raise ValueError(f"d must lie in [0, 1], got {self.d}")


def single_arm_prob(params: DetectorParams) -> float:
    return 10.0 ** (-0.02 * params.l_km) * params.eta


# What a both-photons-arrive event announces, keyed by sender pair:
# (z when the intrinsic 50% BSM coin succeeds, z when it fails).
_TWO_PHOTON_OUTCOME = {
    (0, 0): (1, 0),
    (1, 1): (1, 0),
    (0, 1): (2, 0),
    (1, 0): (2, 0),
    (2, 2): (1, 2),
    (3, 3): (1, 2),
    (2, 3): (0, 0),
    (3, 2): (0, 0),
}


def _event_terms(ps: float, d: float) -> tuple[float, float, float]:
    """(two-photon success, one photon + one dark, two darks) probabilities."""
    two_photon = ps**2 * (1 - d) ** 2 / 2
    one_dark = 2 * ps * (1 - ps) * d * (1 - d) ** 2
    two_dark = 2 * (1 - ps) ** 2 * d**2 * (1 - d) ** 2
    return two_photon, one_dark, two_dark


def closed_form_table(params: DetectorParams) -> OutcomeTable:
    ps = single_arm_prob(params)
    two_photon, one_dark, two_dark = _event_terms(ps, params.d)
    bright = two_photon + one_dark + two_dark
    dark = one_dark + two_dark
    rows = {}
    for pair in ((0, 0), (1, 1)):
        rows[pair] = (bright, dark)
    for pair in ((0, 1), (1, 0)):
        rows[pair] = (dark, bright)
    for pair in ((2, 3), (3, 2)):
        rows[pair] = (dark, dark)
    rows.update(basis1_same_index_rows(params))
    arr = np.zeros((len(PAIRS), 3))
    for pair, (p1, p2) in rows.items():
        arr[PAIR_INDEX[pair]] = (1.0 - p1 - p2, p1, p2)
    return OutcomeTable(arr)


def basis1_same_index_rows(params: DetectorParams) -> dict:
    """p(1|x,x), p(2|x,x) for x in {2, 3}.

    Not written out in closed form alongside the others; mirrored from the
    lossless table, where a same-state pair in basis 1 lands on |phi+> or
    |psi+> with equal odds: p(1|2,2) = p(2|2,2) = p(1|0,0).
    """
    ps = single_arm_prob(params)
    bright = sum(_event_terms(ps, params.d))
    return {(2, 2): (bright, bright), (3, 3): (bright, bright)}


# -- event oracle -------------------------------------------------------------


def classify_events(pair, arrive_a, arrive_b, dark, coin) -> np.ndarray:
    """Announcement z for each sampled event of one sender pair.

    ``dark`` has shape (n, 4); the other arrays have shape (n,).
    """
    arrive_a = np.asarray(arrive_a, dtype=bool)
    arrive_b = np.asarray(arrive_b, dtype=bool)
    dark = np.asarray(dark, dtype=bool)
    coin = np.asarray(coin, dtype=bool)
    z = np.zeros(arrive_a.shape[0], dtype=np.int8)

    heads, tails = _TWO_PHOTON_OUTCOME[tuple(pair)]
    both = arrive_a & arrive_b
    # Photons occupy the canonical detector pair of the announced state;
    # the two idle detectors must stay dark.
    target = np.where(coin, heads, tails)
    idle_clear = np.where(target == 2, ~dark[:, 1] & ~dark[:, 3], ~dark[:, 2] & ~dark[:, 3])
    z = np.where(both & (target != 0) & idle_clear, target, z)

    # One photon, placed on detector 0; exactly one dark count among 1..3
    # picks the partner.
    one = arrive_a ^ arrive_b
    n_other = dark[:, 1].astype(np.int8) + dark[:, 2] + dark[:, 3]
    single = one & (n_other == 1)
    z = np.where(single & dark[:, 1], 1, z)
    z = np.where(single & dark[:, 2], 2, z)

    # No photon; exactly two dark counts decide the pattern.
    none = ~arrive_a & ~arrive_b
    two = none & (dark.sum(axis=1) == 2)
    phi = (dark[:, 0] & dark[:, 1]) | (dark[:, 2] & dark[:, 3])
    psi = (dark[:, 0] & dark[:, 2]) | (dark[:, 1] & dark[:, 3])
    z = np.where(two & phi, 1, z)
    z = np.where(two & psi, 2, z)
    return z.astype(np.int8)


def _shard_counts(components, pair_idx: int, shard: int, size: int, seed: int) -> np.ndarray:
    rng = np.random.Generator(
        np.random.Philox(np.random.SeedSequence(seed, spawn_key=(pair_idx, shard)))
    )
    weights = np.array([w for w, _ in components])
    ps = np.array([single_arm_prob(p) for _, p in components])
    ds = np.array([p.d for _, p in components])
    if len(components) == 1:
        which = np.zeros(size, dtype=np.intp)
    else:
        which = np.searchsorted(np.cumsum(weights), rng.random(size) * weights.sum(), side="right")
        which = np.minimum(which, len(components) - 1)
    ps_i = ps[which]
    d_i = ds[which]
    u = rng.random((size, 7))
    arrive_a = u[:, 0] < ps_i
    arrive_b = u[:, 1] < ps_i
    dark = u[:, 2:6] < d_i[:, None]
    coin = u[:, 6] < 0.5
    z = classify_events(PAIRS[pair_idx], arrive_a, arrive_b, dark, coin)
    return np.bincount(z, minlength=3).astype(np.int64)


def monte_carlo_counts(components, n: int, seed: int) -> np.ndarray:
    """Integer (8, 3) announcement counts, n events per sender pair.

    ``components`` is a list of (weight, DetectorParams); each event draws
    its parameter setting from that mixture. Shards use independent
    counter-based streams keyed by (seed, pair, shard), so the merged counts
    do not depend on the order shards are evaluated in.
    """
    if n < 1:
        raise ValueError("sample count must be >= 1")
    counts = np.zeros((len(PAIRS), 3), dtype=np.int64)
    for pair_idx in range(len(PAIRS)):
        for shard, start in enumerate(range(0, n, SHARD_SIZE)):
            size = min(SHARD_SIZE, n - start)
            counts[pair_idx] += _shard_counts(components, pair_idx, shard, size, seed)
    return counts


def monte_carlo_table(params: DetectorParams, n: int, seed: int) -> OutcomeTable:
    return from_counts(monte_carlo_counts([(1.0, params)], n, seed))


def monte_carlo_mixture_table(components, n: int, seed: int) -> OutcomeTable:
    """Event-sampled table of a weighted mixture of parameter settings."""
    if not components:
        raise ValueError("need at least one mixture component")
    return from_counts(monte_carlo_counts(list(components), n, seed))


def binomial_sigma(table: OutcomeTable, n: int) -> np.ndarray:
    """Per-entry standard deviation of an n-sample frequency estimate of ``table``."""
    p = table.array
    return np.sqrt(p * (1.0 - p) / n)


def within_sigma(estimate: OutcomeTable, reference: OutcomeTable, n: int, k: float = 4.0) -> np.ndarray:
    """Boolean (8, 3) mask: |estimate - reference| <= k binomial sigma of ``reference``."""
    return np.abs(estimate.array - reference.array) <= k * binomial_sigma(reference, n)
