#ifndef CURVETAU_CURVETAU_HPP
#define CURVETAU_CURVETAU_HPP

// Exact invariants of reduced plane curve singularities from branch
// parametrizations: value semigroups, value sets of fractional ideals,
// colengths, Tjurina and Milnor numbers, and the partition bounds.

#include "colength.hpp"
#include "curve.hpp"
#include "document.hpp"
#include "errors.hpp"
#include "linalg.hpp"
#include "macaulay.hpp"
#include "poly.hpp"
#include "rational.hpp"
#include "series.hpp"
#include "span.hpp"
#include "tjurina.hpp"
#include "valuebox.hpp"

#endif
