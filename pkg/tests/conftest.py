import os

import numpy as np
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

settings.register_profile("default", max_examples=200, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", max_examples=1000, deadline=None)
settings.register_profile("fast", max_examples=20, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def _f32(x):
    # float32-representable values keep z + L and 2z exact in double precision
    return float(np.float32(x))


def log_uniform(lo, hi):
    return st.floats(np.log(lo), np.log(hi)).map(lambda t: _f32(np.exp(t)))


frequencies = log_uniform(0.1, 10.0)
lengths = log_uniform(1e-3, 10.0)


@st.composite
def unit_vectors(draw):
    v = np.array(draw(st.tuples(*[st.floats(-1, 1)] * 3)))
    n = np.linalg.norm(v)
    if n < 1e-3:
        v, n = np.array([0.0, 0.0, 1.0]), 1.0
    return (v / n).astype(np.float32).astype(float)


parities = st.sampled_from(["symmetric", "antisymmetric"])
