#pragma once
// Single include point for LAPACKE: pins the complex types to std::complex
// before the headers pick their C defaults.  Every header that needs LAPACKE
// must include this instead of <lapacke.h> so the typedefs agree across TUs.

#include <complex>

#ifndef lapack_complex_float
#define lapack_complex_float std::complex<float>
#endif
#ifndef lapack_complex_double
#define lapack_complex_double std::complex<double>
#endif

#include <lapacke.h>
