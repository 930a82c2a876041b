"""Counting matrices of finite simplicial and CW complexes, verified exactly."""
from kount.complexes import (CWComplex, Graph, SimplicialComplex, attach_cell, barycentric_refinement,
                             f_vector, generate_closure, random_complex, standard_complex,
                             suspension, whitney_complex)
from kount.errors import (DomainError, FloatConversionError, InputError, KountError,
                          SingularMatrixError, SizeLimitError, UnsupportedInputError)
from kount.exact import Polynomial, char_poly, det_exact, inverse_exact, leading_minors, palindrome_check
from kount.matrices import (IntegerMatrix, RationalMatrix, connection_green_inverse, connection_matrix,
                            counting_matrix, green_star_inverse, parametrized_green,
                            parametrized_matrix, supercharge, total_energy)
from kount.spectra import Spectrum, counting_spectrum, eigenvalues_sym, zeta, zeta_grid

__version__ = "0.1.0"
