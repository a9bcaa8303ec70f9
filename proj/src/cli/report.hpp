#pragma once

#include "qsafe/io.hpp"
#include "qsafe/reference_cases.hpp"

namespace qsafe::cli {

// Each report carries a "checks" array of {name, computed, expected, tol, pass}
// and an overall "pass".
io::Json report_table1(double a, double b);
io::Json report_table2(const reference::QubitPairParams& p);
io::Json report_section84(const reference::QubitPairParams& p);
io::Json report_section9();

}  // namespace qsafe::cli
