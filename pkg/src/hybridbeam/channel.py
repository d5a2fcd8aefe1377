"""Clustered narrowband mmWave channel model, ULA steering vectors, and the
fully digital water-filling precoder used as the factorization target."""

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class ArrayGeometry:
    """Uniform linear array: element count and spacing in wavelengths."""

    num_elements: int
    spacing: float = 0.5

    def __post_init__(self):
        if self.num_elements < 1:
            raise ValueError("num_elements must be >= 1")
        if self.spacing <= 0.0:
            raise ValueError("spacing must be > 0")


@dataclass(frozen=True)
class ClusterParams:
    """Cluster/ray geometry of the channel.

    cluster_powers defaults to unit average power per cluster; angular_spread is
    the Laplacian scale (radians) of per-ray offsets about each cluster mean.
    The default spread keeps two-cluster channels well enough conditioned that
    a five-stream link is usable; tighter spreads make the receive side
    effectively rank two to three.
    """

    num_clusters: int = 2
    rays_per_cluster: int = 3
    cluster_powers: np.ndarray | None = None
    angular_spread: float = 0.38

    def __post_init__(self):
        if self.num_clusters < 1 or self.rays_per_cluster < 1:
            raise ValueError("cluster and ray counts must be >= 1")
        if self.angular_spread <= 0.0:
            raise ValueError("angular_spread must be > 0")
        powers = self.cluster_powers
        if powers is None:
            powers = np.ones(self.num_clusters)
        powers = np.asarray(powers, dtype=float)
        if powers.shape != (self.num_clusters,) or np.any(powers <= 0.0):
            raise ValueError("cluster_powers must hold one positive value per cluster")
        object.__setattr__(self, "cluster_powers", powers)


@dataclass
class ChannelRealization:
    """One channel draw: matrix, per-ray parameters, and a cached thin SVD."""

    h: np.ndarray                    # (n_rx, n_tx)
    gains: np.ndarray                # (n_clusters, n_rays)
    aod: np.ndarray                  # (n_clusters, n_rays), radians
    aoa: np.ndarray                  # (n_clusters, n_rays), radians
    u: np.ndarray = field(repr=False, default=None)
    s: np.ndarray = field(repr=False, default=None)
    v: np.ndarray = field(repr=False, default=None)

    def __post_init__(self):
        if self.u is None:
            u, s, vh = np.linalg.svd(self.h, full_matrices=False)
            self.u, self.s, self.v = u, s, vh.conj().T

    @property
    def rank(self) -> int:
        if self.s.size == 0 or self.s[0] == 0.0:
            return 0
        tol = self.s[0] * max(self.h.shape) * np.finfo(float).eps
        return int(np.count_nonzero(self.s > tol))


def array_response(geometry: ArrayGeometry, angle: float) -> np.ndarray:
    """Unit-norm ULA steering vector: entry k = exp(j 2 pi spacing k sin(angle)) / sqrt(N)."""
    k = np.arange(geometry.num_elements)
    phase = 2.0 * np.pi * geometry.spacing * np.sin(angle)
    return np.exp(1j * phase * k) / np.sqrt(geometry.num_elements)


def _steering_matrix(geometry: ArrayGeometry, angles: np.ndarray) -> np.ndarray:
    k = np.arange(geometry.num_elements)[:, None]
    phases = 2.0 * np.pi * geometry.spacing * np.sin(angles.ravel())[None, :]
    return np.exp(1j * k * phases) / np.sqrt(geometry.num_elements)


def draw_channel(
    rng: np.random.Generator,
    tx_geom: ArrayGeometry,
    rx_geom: ArrayGeometry,
    clusters: ClusterParams,
) -> ChannelRealization:
    """Draw one clustered channel realization.

    Cluster mean angles are uniform on [0, 2pi), separately for departure and
    arrival; each ray offsets its cluster mean by a Laplacian draw. Ray gains
    are complex Gaussian with the per-cluster average power, and the matrix is
    scaled by sqrt(n_tx * n_rx / (n_clusters * n_rays)).
    """
    n_cl, n_ray = clusters.num_clusters, clusters.rays_per_cluster
    mean_aod = rng.uniform(0.0, 2.0 * np.pi, n_cl)
    mean_aoa = rng.uniform(0.0, 2.0 * np.pi, n_cl)
    aod = mean_aod[:, None] + rng.laplace(0.0, clusters.angular_spread, (n_cl, n_ray))
    aoa = mean_aoa[:, None] + rng.laplace(0.0, clusters.angular_spread, (n_cl, n_ray))
    std = np.sqrt(clusters.cluster_powers / 2.0)[:, None]
    gains = std * (rng.standard_normal((n_cl, n_ray)) + 1j * rng.standard_normal((n_cl, n_ray)))

    a_tx = _steering_matrix(tx_geom, aod)
    a_rx = _steering_matrix(rx_geom, aoa)
    scale = np.sqrt(tx_geom.num_elements * rx_geom.num_elements / (n_cl * n_ray))
    h = scale * (a_rx * gains.ravel()[None, :]) @ a_tx.conj().T
    return ChannelRealization(h=h, gains=gains, aod=aod, aoa=aoa)


def waterfill(singular_values, noise_var: float, budget: float) -> np.ndarray:
    """Water-filling power allocation over channel eigenmodes.

    Returns p with sum(p) = budget and p_i = max(0, mu - noise_var / s_i^2)
    for the unique water level mu (KKT conditions of the capacity problem).
    """
    s = np.atleast_1d(np.asarray(singular_values, dtype=float))
    if noise_var <= 0.0 or budget <= 0.0:
        raise ValueError("noise_var and budget must be > 0")
    s2 = s * s
    if not np.any(s2 > 0.0):
        raise ValueError("degenerate channel: all singular values are zero")
    with np.errstate(divide="ignore"):
        floor = np.where(s2 > 0.0, noise_var / s2, np.inf)
    order = np.argsort(floor)
    floor_sorted = floor[order]
    n_finite = int(np.count_nonzero(np.isfinite(floor_sorted)))
    cum = np.cumsum(floor_sorted[:n_finite])
    for k in range(n_finite, 0, -1):
        mu = (budget + cum[k - 1]) / k
        if mu > floor_sorted[k - 1]:
            break
    p = np.maximum(mu - floor, 0.0)
    p[floor >= mu] = 0.0
    return p


def digital_precoder(
    ch: ChannelRealization,
    n_streams: int,
    noise_var: float,
    budget: float | None = None,
) -> np.ndarray:
    """Fully digital precoder: leading right singular vectors weighted by
    water-filled per-mode amplitudes. Trace power equals the budget
    (default: one unit per stream).

    Streams beyond the channel's usable rank receive zero power from the
    water filling and become inert columns; only asking for more streams
    than the array has singular modes is an error.
    """
    if budget is None:
        budget = float(n_streams)
    if n_streams > min(ch.h.shape):
        raise ValueError(
            f"n_streams={n_streams} exceeds the channel rank (at most {min(ch.h.shape)})"
        )
    p = waterfill(ch.s[:n_streams], noise_var, budget)
    return ch.v[:, :n_streams] * np.sqrt(p)[None, :]
