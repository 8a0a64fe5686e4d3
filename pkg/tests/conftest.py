import pytest

from salmetric import SynthConfig, gen_dataset

# The shared centrally-biased dataset used by the sampling, quality, and
# acceptance tests: 200 images, 64x64, strength 0.8, 20 fixations per image.
BIAS_CONFIG = SynthConfig(
    n_images=200,
    frame=(64, 64),
    fixations_per_image=20,
    center_bias_strength=0.8,
    n_object_clusters=3,
    cluster_sigma=3.0,
    seed=7,
)


@pytest.fixture(scope="session")
def bias_dataset():
    return gen_dataset(BIAS_CONFIG)
