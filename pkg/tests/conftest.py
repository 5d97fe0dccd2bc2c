from gmpy2 import mpq
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

settings.register_profile(
    "default",
    deadline=None,
    max_examples=30,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("default")

rationals = st.builds(lambda p, q: mpq(p, q), st.integers(-6, 6), st.integers(1, 4))


@st.composite
def int_matrices(draw, n=None, max_n=6, lo=-3, hi=3):
    n = n or draw(st.integers(1, max_n))
    return [[draw(st.integers(lo, hi)) for _ in range(n)] for _ in range(n)]
