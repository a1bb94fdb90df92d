"""Per-tone channel and noise descriptions.

Everything downstream works on squared-magnitude (power) gains: a channel is
a stack of K gain matrices, one per frequency interval ("tone"), with direct
gains on the diagonal and crosstalk couplings off it.  Noise is stored as
linear in-tone power per user.  Power units are arbitrary but must be
consistent across budgets and noise (the bundled scenarios use mW).
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np


class ChannelCsvError(ValueError):
    """Raised when a channel or noise CSV file cannot be parsed."""


def _lock(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class FrequencyGrid:
    """Tone boundaries in Hz.  K tones are the intervals between K+1 edges."""

    edges: np.ndarray

    def __post_init__(self):
        edges = _lock(np.asarray(self.edges, dtype=float))
        object.__setattr__(self, "edges", edges)
        if edges.ndim != 1 or edges.size < 2:
            raise ValueError("grid needs at least two edges")
        if not np.all(np.diff(edges) > 0):
            raise ValueError("grid edges must be strictly increasing")

    @property
    def num_tones(self) -> int:
        return self.edges.size - 1

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.edges)

    @property
    def centers(self) -> np.ndarray:
        return 0.5 * (self.edges[:-1] + self.edges[1:])

    @property
    def span(self) -> float:
        return float(self.edges[-1] - self.edges[0])


def make_uniform_grid(f_start: float, f_end: float, num_tones: int) -> FrequencyGrid:
    if num_tones < 1:
        raise ValueError("num_tones must be >= 1")
    return FrequencyGrid(np.linspace(float(f_start), float(f_end), num_tones + 1))


@dataclass(frozen=True)
class ChannelMatrixSet:
    """Stack of per-tone power-gain matrices, shape (K, N, N).

    gains[k, i, j] is the squared channel magnitude from transmitter j into
    receiver i on tone k; the diagonal holds direct gains.  A zero diagonal
    entry marks a band the user cannot transmit in (for example a band-plan
    mask); off-diagonal entries are crosstalk couplings and must be >= 0.
    """

    gains: np.ndarray
    grid: FrequencyGrid

    def __post_init__(self):
        gains = _lock(np.asarray(self.gains, dtype=float))
        object.__setattr__(self, "gains", gains)
        if gains.ndim != 3 or gains.shape[1] != gains.shape[2]:
            raise ValueError("gains must have shape (num_tones, N, N)")
        if gains.shape[0] != self.grid.num_tones:
            raise ValueError("gain stack does not match grid tone count")
        if not np.all(np.isfinite(gains)) or np.any(gains < 0):
            raise ValueError("gains must be finite and non-negative")

    @property
    def num_users(self) -> int:
        return self.gains.shape[1]

    @property
    def num_tones(self) -> int:
        return self.gains.shape[0]

    def direct_gains(self, user: int) -> np.ndarray:
        return self.gains[:, user, user]

    def coupling(self, receiver: int, transmitter: int) -> np.ndarray:
        return self.gains[:, receiver, transmitter]


@dataclass(frozen=True)
class NoiseProfile:
    """Linear in-tone noise power per user, shape (N, K).  Strictly positive."""

    values: np.ndarray

    def __post_init__(self):
        values = _lock(np.atleast_2d(np.asarray(self.values, dtype=float)))
        object.__setattr__(self, "values", values)
        if not np.all(np.isfinite(values)) or np.any(values <= 0):
            raise ValueError("noise must be finite and strictly positive")

    @property
    def num_users(self) -> int:
        return self.values.shape[0]

    @classmethod
    def white(cls, level: float, num_users: int, num_tones: int) -> "NoiseProfile":
        return cls(np.full((num_users, num_tones), float(level)))

    @classmethod
    def from_psd_dbm_hz(cls, psd_dbm_hz: float, grid: FrequencyGrid,
                        num_users: int) -> "NoiseProfile":
        """White noise at a PSD in dBm/Hz, integrated over each tone (mW)."""
        per_tone = 10.0 ** (psd_dbm_hz / 10.0) * grid.widths
        return cls(np.tile(per_tone, (num_users, 1)))


def symmetric_two_band_channel(h: float) -> ChannelMatrixSet:
    """Two users, two equal bands, identical cross coupling h on both.

    h is a squared magnitude and must satisfy 0 <= h < 1.  Band widths are
    one half each, so a full-band rate of w*log2(...) per band reproduces
    the usual half-log payoffs of the symmetric game.
    """
    if not 0 <= h < 1:
        raise ValueError("symmetric coupling h must satisfy 0 <= h < 1")
    m = np.array([[1.0, h], [h, 1.0]])
    return ChannelMatrixSet(np.stack([m, m]), FrequencyGrid(np.array([0.0, 0.5, 1.0])))


def nearfar_two_band_channel(alpha: float, beta: float, gamma: float,
                             delta: float = 0.0, epsilon: float = 0.0,
                             w1: float = 1.0, w2: float = 1.0) -> ChannelMatrixSet:
    """Two-band near-far channel: a weak user confined to the first band.

    Band 1 carries [[alpha, beta], [gamma, 1]]; band 2 carries
    [[0, delta], [epsilon, 1]].  User 0 is the weak (far) user with direct
    gain alpha in band 1 only; user 1 is the strong (near) user with unit
    direct gain everywhere.
    """
    for name, v in (("alpha", alpha), ("beta", beta), ("gamma", gamma),
                    ("delta", delta), ("epsilon", epsilon)):
        if v < 0:
            raise ValueError(f"{name} must be >= 0")
    if alpha == 0:
        raise ValueError("alpha must be > 0, otherwise the weak user has no channel")
    band1 = np.array([[alpha, beta], [gamma, 1.0]])
    band2 = np.array([[0.0, delta], [epsilon, 1.0]])
    grid = FrequencyGrid(np.array([0.0, w1, w1 + w2]))
    return ChannelMatrixSet(np.stack([band1, band2]), grid)


def synthetic_dsl_channel(lengths_km, grid: FrequencyGrid,
                          coupling_lengths_km=None,
                          attenuation: float = 5e-4,
                          fext_coeff: float = 1e-16) -> ChannelMatrixSet:
    """Deterministic synthetic DSL-like channel for N lines.

    Direct gain follows the classic twisted-pair shape
    g(f, L) = exp(-attenuation * L_km * sqrt(f_Hz)), evaluated at tone
    centers.  Crosstalk coupling from line j into line i is
    fext_coeff * f^2 * g(f, Lc(i, j)) with Lc the coupling length, which
    defaults to the shorter of the two line lengths (the shared binder
    segment).  This is a stylised model, not a cable measurement; the
    constants are configuration, chosen to give DSL-like attenuation slopes.
    """
    lengths = np.asarray(lengths_km, dtype=float)
    if lengths.ndim != 1 or lengths.size < 1:
        raise ValueError("lengths_km must be a 1-D sequence")
    if np.any(lengths < 0):
        raise ValueError("line lengths must be >= 0")
    n = lengths.size
    if coupling_lengths_km is None:
        lc = np.minimum.outer(lengths, lengths)
    else:
        lc = np.asarray(coupling_lengths_km, dtype=float)
        if lc.shape != (n, n) or np.any(lc < 0):
            raise ValueError("coupling_lengths_km must be a non-negative (N, N) matrix")
    f = grid.centers
    root_f = np.sqrt(f)
    direct = np.exp(-attenuation * np.outer(root_f, lengths))        # (K, N)
    gains = np.empty((grid.num_tones, n, n))
    for i in range(n):
        for j in range(n):
            if i == j:
                gains[:, i, i] = direct[:, i]
            else:
                gains[:, i, j] = fext_coeff * f ** 2 * np.exp(-attenuation * lc[i, j] * root_f)
    return ChannelMatrixSet(gains, grid)


# --- CSV interchange -------------------------------------------------------
#
# Channel files carry one row per tone, ascending in frequency, with the
# tone's upper edge in the first column:
#     freq_hz,g_1_1,g_1_2,...,g_N_N
# The lower edge of the first tone is recovered from the first spacing
# (exact for uniform grids); a single-tone file is assumed to start at 0.
# Noise files use the same frequency convention with columns n_1..n_N.


def _read_rows(path) -> list[list[str]]:
    with open(path, newline="") as fh:
        return [row for row in csv.reader(fh) if row]


def _edges_from_upper(freqs: np.ndarray, path) -> FrequencyGrid:
    if np.any(np.diff(freqs) <= 0):
        raise ChannelCsvError(f"{path}: frequencies must be strictly ascending")
    if freqs.size >= 2:
        f0 = 2 * freqs[0] - freqs[1]
    else:
        f0 = 0.0
    if f0 >= freqs[0]:
        raise ChannelCsvError(f"{path}: cannot reconstruct a positive first tone width")
    return FrequencyGrid(np.concatenate([[f0], freqs]))


def _parse_float(cell: str, path, line: int) -> float:
    try:
        return float(cell)
    except ValueError:
        raise ChannelCsvError(f"{path}: line {line}: not a number: {cell!r}") from None


def load_channel_csv(path) -> ChannelMatrixSet:
    rows = _read_rows(path)
    if len(rows) < 2:
        raise ChannelCsvError(f"{path}: no tone rows")
    header = rows[0]
    n_sq = len(header) - 1
    n = int(round(np.sqrt(n_sq)))
    if header[0] != "freq_hz" or n * n != n_sq or n < 1:
        raise ChannelCsvError(f"{path}: header must be freq_hz,g_1_1,...,g_N_N")
    freqs, stacks = [], []
    for ln, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise ChannelCsvError(f"{path}: line {ln}: expected {len(header)} fields, got {len(row)}")
        vals = [_parse_float(c, path, ln) for c in row]
        if any(v < 0 for v in vals[1:]):
            raise ChannelCsvError(f"{path}: line {ln}: negative gain")
        freqs.append(vals[0])
        stacks.append(np.array(vals[1:]).reshape(n, n))
    grid = _edges_from_upper(np.array(freqs), path)
    return ChannelMatrixSet(np.stack(stacks), grid)


def write_channel_csv(channel: ChannelMatrixSet, path) -> None:
    n = channel.num_users
    header = ["freq_hz"] + [f"g_{i + 1}_{j + 1}" for i in range(n) for j in range(n)]
    _write_rows(path, header, channel.grid.edges[1:],
                channel.gains.reshape(channel.num_tones, n * n))


def load_noise_csv(path) -> tuple[NoiseProfile, FrequencyGrid]:
    rows = _read_rows(path)
    if len(rows) < 2:
        raise ChannelCsvError(f"{path}: no tone rows")
    header = rows[0]
    n = len(header) - 1
    if header[0] != "freq_hz" or n < 1 or header[1:] != [f"n_{i + 1}" for i in range(n)]:
        raise ChannelCsvError(f"{path}: header must be freq_hz,n_1,...,n_N")
    freqs, vals = [], []
    for ln, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise ChannelCsvError(f"{path}: line {ln}: expected {len(header)} fields, got {len(row)}")
        nums = [_parse_float(c, path, ln) for c in row]
        if any(v <= 0 for v in nums[1:]):
            raise ChannelCsvError(f"{path}: line {ln}: noise must be > 0")
        freqs.append(nums[0])
        vals.append(nums[1:])
    grid = _edges_from_upper(np.array(freqs), path)
    return NoiseProfile(np.array(vals).T), grid


def write_noise_csv(noise: NoiseProfile, grid: FrequencyGrid, path) -> None:
    header = ["freq_hz"] + [f"n_{i + 1}" for i in range(noise.num_users)]
    _write_rows(path, header, grid.edges[1:], noise.values.T)


def _write_rows(path, header, freqs, matrix) -> None:
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for f, row in zip(freqs, matrix):
        buf.write("%.17g" % f + "".join(",%.17g" % v for v in row) + "\n")
    with open(path, "w", newline="") as fh:
        fh.write(buf.getvalue())
