import numpy as np
import pytest

from irsbf import BeamformingState, ChannelEstimates, ErrorModel, SystemDims


def cscg(rng, *shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def random_instance(seed, M=2, N=4, Nr=2, K=2, Ns=2, error_free=False, noise=0.1):
    """Random channels, errors and a random (feasible) beamforming state."""
    rng = np.random.default_rng(seed)
    dims = SystemDims(M, N, Nr, K, Ns)
    est = ChannelEstimates(
        cscg(rng, N, M),
        [cscg(rng, M, Nr) for _ in range(K)],
        [cscg(rng, N, Nr) for _ in range(K)],
    )
    if error_free:
        err = ErrorModel.error_free(K, noise)
    else:
        err = ErrorModel(
            0.05 * rng.uniform(),
            0.05 * rng.uniform(size=K),
            0.05 * rng.uniform(size=K),
            (noise,) * K,
        )
    W = [cscg(rng, M, Ns) for _ in range(K)]
    C = [cscg(rng, Nr, Ns) for _ in range(K)]
    T = []
    for _ in range(K):
        X = cscg(rng, Ns, Ns)
        T.append(X @ X.conj().T + 0.1 * np.eye(Ns))
    phi = rng.uniform(0.0, 2.0 * np.pi, N)
    state = BeamformingState(W, C, T, phi, np.ones(K))
    return dims, est, err, state, rng


@pytest.fixture
def instance():
    return random_instance(0)
