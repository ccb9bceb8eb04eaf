"""Frequency-domain Monte-Carlo link engine.

Everything happens on the post-FFT block model y = sqrt(Es) X h + n with
i.i.d. unit-variance Rayleigh fading h and complex Gaussian noise n of
variance N0 = 10^(-snr_db/10) (Es = 1: all shipped constellations have
unit average energy, so snr_db is symbol SNR per subcarrier).

Randomness comes from counter-based Philox streams keyed by
(master_seed, purpose tag, SNR index, batch index). Blocks are simulated
in fixed-size batches of BATCH_BLOCKS, each batch owning one stream, so
results are bit-identical for any worker count and any execution order.
Block counts are therefore always multiples of BATCH_BLOCKS.
"""

import hashlib
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from .codebook import Scheme

__all__ = [
    "BATCH_BLOCKS",
    "SimConfig",
    "BlockChannel",
    "BerPoint",
    "BerReport",
    "RatePoint",
    "RateReport",
    "draw_block_channel",
    "transmit_block",
    "ml_detect",
    "split_bits",
    "simulate_ber",
    "estimate_rate",
    "ber_csv_rows",
    "rate_csv_rows",
]

BATCH_BLOCKS = 4096  # blocks per RNG stream; fixed, part of the reproducibility contract
_WAVE_BATCHES = 8  # stop condition is evaluated on whole waves
_TAG_BER = 0
_TAG_RATE = 1
_M64 = (1 << 64) - 1


def _stream(master_seed: int, tag: int, snr_index: int, batch_index: int) -> np.random.Generator:
    key = np.array([master_seed & _M64, (master_seed >> 64) & _M64], dtype=np.uint64)
    counter = np.array([0, batch_index, snr_index, tag], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(counter=counter, key=key))


def snr_db_to_n0(snr_db: float) -> float:
    return 10.0 ** (-snr_db / 10.0)


@dataclass(frozen=True)
class SimConfig:
    scheme: Scheme
    snr_db_grid: tuple[float, ...]
    min_bit_errors: int = 200
    max_blocks: int = 10_000_000
    master_seed: int = 1905

    def __post_init__(self):
        if len(self.snr_db_grid) == 0:
            raise ValueError("snr grid must be non-empty")
        if self.min_bit_errors < 1:
            raise ValueError("min_bit_errors must be >= 1")

    def canonical_text(self) -> str:
        return (
            f"scheme={self.scheme.name} n={self.scheme.n} f1={self.scheme.f1} "
            f"f2={self.scheme.f2} kind={self.scheme.family.kind} "
            f"snr={','.join(f'{s:.6g}' for s in self.snr_db_grid)} "
            f"min_errors={self.min_bit_errors} max_blocks={self.max_blocks} "
            f"seed={self.master_seed}"
        )

    def digest(self) -> str:
        return hashlib.sha256(self.canonical_text().encode()).hexdigest()[:12]


@dataclass(frozen=True)
class BlockChannel:
    """One block's channel realization."""

    h: np.ndarray
    noise: np.ndarray
    es: float
    n0: float


def draw_block_channel(rng: np.random.Generator, n: int, n0: float, es: float = 1.0) -> BlockChannel:
    h = (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / math.sqrt(2.0)
    noise = (rng.standard_normal(n) + 1j * rng.standard_normal(n)) * math.sqrt(n0 / 2.0)
    return BlockChannel(h=h, noise=noise, es=es, n0=n0)


def transmit_block(bits: int, scheme: Scheme) -> np.ndarray:
    """Map one f-bit word to its block of symbols (index word in the top f1
    bits, modulation word below)."""
    from .codebook import bits_to_pattern, expand_codeword

    if not 0 <= bits < (1 << scheme.f):
        raise ValueError(f"bit word {bits} out of range for f={scheme.f}")
    pattern = bits_to_pattern(bits >> scheme.f2, scheme.book)
    return expand_codeword(pattern, bits & ((1 << scheme.f2) - 1), scheme.family)


def split_bits(scheme: Scheme, bits: int) -> tuple[tuple[int, ...], int]:
    """(pattern, modulation word) carried by a bit word."""
    return scheme.book.patterns[bits >> scheme.f2], bits & ((1 << scheme.f2) - 1)


def _detect_batch(y, h, codewords, es):
    """ML decision for a batch: argmin_j ||y - sqrt(es) c_j o h||^2, ties to
    the lowest index. The |y|^2 term is constant per block and dropped."""
    J = codewords.shape[0]
    B = y.shape[0]
    cc = np.abs(codewords) ** 2  # (J, n)
    out = np.empty(B, dtype=np.int64)
    rows = max(1, (1 << 21) // J)
    root_es = math.sqrt(es)
    for lo in range(0, B, rows):
        hi = min(B, lo + rows)
        w = np.conj(y[lo:hi]) * h[lo:hi]  # (b, n)
        cross = (w @ codewords.T).real  # (b, J)
        power = (np.abs(h[lo:hi]) ** 2) @ cc.T  # (b, J)
        metric = es * power - 2.0 * root_es * cross
        out[lo:hi] = np.argmin(metric, axis=1)
    return out


def ml_detect(y, h, scheme: Scheme, es: float = 1.0) -> int:
    """Exhaustive ML detection of a single block; returns the bit word."""
    return int(_detect_batch(np.atleast_2d(y), np.atleast_2d(h), scheme.codewords, es)[0])


@dataclass(frozen=True)
class BerPoint:
    snr_db: float
    blocks: int
    bits_sent: int
    bit_errors: int
    index_bit_errors: int
    mod_bit_errors: int
    converged: bool

    @property
    def ber(self) -> float:
        return self.bit_errors / self.bits_sent

    @property
    def index_ber(self) -> float:
        return self.index_bit_errors / self.bits_sent

    @property
    def mod_ber(self) -> float:
        return self.mod_bit_errors / self.bits_sent


@dataclass(frozen=True)
class BerReport:
    scheme: str
    seed: int
    config_hash: str
    points: tuple[BerPoint, ...]

    @property
    def converged(self) -> bool:
        return all(p.converged for p in self.points)


def _ber_batch(scheme, snr_index, batch_index, n0, seed, es=1.0):
    """Simulate one batch; returns integer error counters.

    Channel and noise are drawn before the data bits, so two schemes with
    the same block length and seed see identical fading realizations: BER
    comparisons between them are paired (common random numbers).
    """
    gen = _stream(seed, _TAG_BER, snr_index, batch_index)
    n = scheme.n
    f, f2 = scheme.f, scheme.f2
    B = BATCH_BLOCKS
    h = (gen.standard_normal((B, n)) + 1j * gen.standard_normal((B, n))) / math.sqrt(2.0)
    noise = (gen.standard_normal((B, n)) + 1j * gen.standard_normal((B, n))) * math.sqrt(n0 / 2.0)
    bits = gen.integers(0, 1 << f, size=B, dtype=np.uint64)
    tx = scheme.codewords[bits]
    y = math.sqrt(es) * tx * h + noise
    det = _detect_batch(y, h, scheme.codewords, es).astype(np.uint64)
    x = bits ^ det
    total = int(np.bitwise_count(x).sum())
    idx_err = int(np.bitwise_count(x >> np.uint64(f2)).sum())
    return total, idx_err, total - idx_err


def simulate_ber(config: SimConfig, workers: int = 1) -> BerReport:
    """Monte-Carlo BER over the SNR grid.

    Each point runs whole waves of batches until min_bit_errors is reached
    or the block budget is exhausted (then flagged non-converged). Identical
    configs give bit-identical reports for any worker count.
    """
    scheme = config.scheme
    max_batches = max(1, config.max_blocks // BATCH_BLOCKS)
    pool = ThreadPoolExecutor(max_workers=workers) if workers > 1 else None
    points = []
    try:
        for si, snr_db in enumerate(config.snr_db_grid):
            n0 = snr_db_to_n0(snr_db)
            tot = idx = mod = 0
            batches_done = 0
            while batches_done < max_batches:
                todo = range(batches_done, min(batches_done + _WAVE_BATCHES, max_batches))
                job = lambda b: _ber_batch(scheme, si, b, n0, config.master_seed)
                results = pool.map(job, todo) if pool else map(job, todo)
                for t, i, m in results:  # fixed batch order
                    tot += t
                    idx += i
                    mod += m
                batches_done = todo.stop
                if tot >= config.min_bit_errors:
                    break
            blocks = batches_done * BATCH_BLOCKS
            points.append(
                BerPoint(
                    snr_db=snr_db, blocks=blocks, bits_sent=blocks * scheme.f,
                    bit_errors=tot, index_bit_errors=idx, mod_bit_errors=mod,
                    converged=tot >= config.min_bit_errors,
                )
            )
    finally:
        if pool:
            pool.shutdown()
    return BerReport(
        scheme=scheme.name, seed=config.master_seed, config_hash=config.digest(),
        points=tuple(points),
    )


@dataclass(frozen=True)
class RatePoint:
    snr_db: float
    rate: float
    stderr: float
    draws: int


@dataclass(frozen=True)
class RateReport:
    scheme: str
    seed: int
    config_hash: str
    points: tuple[RatePoint, ...]


_DRAW_BATCH = 256


def estimate_rate(config: SimConfig, draws: int = 4096) -> RateReport:
    """Achievable rate by Monte-Carlo average of the mutual-information
    log-sum-exp term over channel and noise draws.

    For each draw, every candidate i contributes log2 sum_j exp(d(i,j))
    with d(i,j) = (||n||^2 - ||h o (x_i - x_j) + n||^2) / N0, evaluated in
    max-shifted form; the rate is (f - mean over draws and i) / n. The
    number of draws is rounded up to whole batches.
    """
    scheme = config.scheme
    X = scheme.codewords
    J, n = X.shape
    if J > 8192:
        raise ValueError(f"rate estimator is exhaustive over pairs; 2^f={J} too large")
    f = scheme.f
    n_batches = max(1, math.ceil(draws / _DRAW_BATCH))
    i_chunk = max(1, (1 << 22) // (J * _DRAW_BATCH))  # keep tiles ~4M elements
    points = []
    for si, snr_db in enumerate(config.snr_db_grid):
        n0 = snr_db_to_n0(snr_db)
        t_vals = []
        for bi in range(n_batches):
            gen = _stream(config.master_seed, _TAG_RATE, si, bi)
            B = _DRAW_BATCH
            h = (gen.standard_normal((B, n)) + 1j * gen.standard_normal((B, n))) / math.sqrt(2.0)
            noise = (gen.standard_normal((B, n)) + 1j * gen.standard_normal((B, n))) * math.sqrt(n0 / 2.0)
            a = (np.abs(h) ** 2).T  # (n, B)
            u = (np.conj(h) * noise).T  # (n, B)
            acc = np.zeros(B)
            for lo in range(0, J, i_chunk):
                hi = min(J, lo + i_chunk)
                D = X[lo:hi, None, :] - X[None, :, :]  # (ci, J, n)
                ci = hi - lo
                Dm = D.reshape(ci * J, n)
                quad = (np.abs(Dm) ** 2) @ a  # (ci*J, B)
                cross = 2.0 * (np.conj(Dm) @ u).real
                delta = -(quad + cross) / n0
                acc += logsumexp(delta.reshape(ci, J, B), axis=1).sum(axis=0)
            t_vals.append(acc / (J * math.log(2.0)))
        t = np.concatenate(t_vals)
        rate_val = (f - float(t.mean())) / n
        stderr = float(t.std(ddof=1)) / math.sqrt(t.size) / n
        points.append(RatePoint(snr_db=snr_db, rate=rate_val, stderr=stderr, draws=t.size))
    return RateReport(
        scheme=scheme.name, seed=config.master_seed, config_hash=config.digest(),
        points=tuple(points),
    )


def ber_csv_rows(report: BerReport):
    yield "snr_db,bits,errors,ber,index_ber,mod_ber,converged"
    for p in report.points:
        yield (
            f"{p.snr_db:.9g},{p.bits_sent},{p.bit_errors},{p.ber:.9g},"
            f"{p.index_ber:.9g},{p.mod_ber:.9g},{1 if p.converged else 0}"
        )


def rate_csv_rows(report: RateReport):
    yield "snr_db,rate,stderr,draws"
    for p in report.points:
        yield f"{p.snr_db:.9g},{p.rate:.9g},{p.stderr:.9g},{p.draws}"
