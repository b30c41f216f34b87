import numpy as np
import pytest

from complexchaos import Kernel


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240817)


def brute_block_symmetrize(kernel: Kernel, blocks: list[list[int]]) -> np.ndarray:
    """Independent symmetrization oracle: explicit permutation enumeration
    over the given axis blocks, written without the library's transpose
    shortcuts."""
    import itertools

    arr = np.zeros_like(kernel.coeffs)
    groups = [list(itertools.permutations(block)) for block in blocks]
    count = 0
    for combo in itertools.product(*groups):
        mapping = {}
        for block, perm in zip(blocks, combo):
            mapping.update(dict(zip(block, perm)))
        order = [mapping.get(axis, axis) for axis in range(kernel.coeffs.ndim)]
        src = kernel.coeffs
        out = np.empty_like(src)
        for idx in np.ndindex(*src.shape):
            out[idx] = src[tuple(idx[order[a]] for a in range(len(order)))]
        arr += out
        count += 1
    return arr / count
