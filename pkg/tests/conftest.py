import numpy as np

ATOL = 1e-12
RTOL = 1e-9


def assert_close(actual, desired, atol=ATOL, rtol=RTOL):
    np.testing.assert_allclose(np.asarray(actual), np.asarray(desired), atol=atol, rtol=rtol)
