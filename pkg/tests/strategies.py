"""Shared hypothesis strategies."""

from hypothesis import strategies as st

from hecke_tqft.laurent import LaurentPoly, QView

coefficients = st.integers(min_value=-9, max_value=9)
exponents = st.integers(min_value=-6, max_value=6)

laurent = st.dictionaries(exponents, coefficients, max_size=6).map(LaurentPoly)
even_laurent = st.dictionaries(exponents.map(lambda e: 2 * e), coefficients, max_size=6).map(LaurentPoly)
qviews = st.dictionaries(exponents, coefficients, max_size=6).map(QView)
nonzero_points = st.fractions(min_value=-5, max_value=5, max_denominator=7).filter(lambda x: x != 0)
