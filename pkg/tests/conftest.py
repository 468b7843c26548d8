import pytest

from mapbias import MapParams, build_dataset, random_corpus_scale, sample_distribution

SAMPLES = 10**6
SEED = 1


@pytest.fixture(scope="session")
def default_scale():
    return random_corpus_scale(25)


@pytest.fixture(scope="session")
def experiment(default_scale):
    """Session-cached sampling runs at the package defaults (heavy)."""
    cache = {}

    def run(mu, eps, skip, delta=0.0, samples=SAMPLES, seed=SEED):
        key = (mu, eps, skip, delta, samples, seed)
        if key not in cache:
            params = MapParams(mu=mu, eps=eps, delta=delta, transient_skip=skip)
            ft = sample_distribution(params, samples, seed)
            cache[key] = build_dataset(ft, default_scale)
        return cache[key]

    return run
