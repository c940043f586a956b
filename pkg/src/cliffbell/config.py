import importlib.util

#: version string embedded in every machine-readable report
SCHEMA = 'cliffbell-1'

#: master seed used when none is given (reports must be reproducible)
DEFAULT_SEED = 20070703

#: number of random configurations drawn per sampled check
DEFAULT_SAMPLES = 10_000

#: absolute per-coefficient tolerance for identity residuals
DEFAULT_TOLERANCE = 1e-12

#: maximum deviation of an input norm from 1 that is silently renormalized
DIRECTION_TOLERANCE = 1e-9

#: minimum |a x b| for which z = (a x b) / sin(theta) is defined
DEGENERACY_THRESHOLD = 1e-9

#: bound for grades that cancel exactly under the two-point measure
GRADE_CANCELLATION_TOLERANCE = 1e-15

#: Hermiticity tolerance for operators passed to the singlet oracle
HERMITIAN_TOLERANCE = 1e-10

#: bound on the discarded imaginary part of a singlet expectation
IMAGINARY_TOLERANCE = 1e-12

#: random configurations evaluated per pipeline task
CHUNK_SIZE = 2500

#: grid rows evaluated per pipeline task
ROW_BLOCK = 45

RAY_FLAG = importlib.util.find_spec('ray') is not None
