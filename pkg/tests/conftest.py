import numpy as np
import pytest

from ncup import AlgebraShape

# The four algebras every randomized suite runs over: the scalars, the
# commutative 2-block case, a full matrix block, and a mixed sum.
ALGEBRAS = {
    "C": AlgebraShape((1,)),
    "C2": AlgebraShape((1, 1)),
    "M2": AlgebraShape((2,)),
    "C+M2": AlgebraShape((1, 2)),
}


@pytest.fixture(params=list(ALGEBRAS), ids=list(ALGEBRAS))
def shape(request):
    return ALGEBRAS[request.param]


@pytest.fixture
def rng():
    return np.random.default_rng(20260814)
