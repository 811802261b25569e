#pragma once

#include <string>

namespace prox0 {

// Outcome of checking one proved inequality at runtime. Residuals follow one
// convention everywhere: for an inequality LHS <= RHS + tol, each sample
// contributes LHS - RHS, and `worst` is the largest such value. The check
// passes when worst <= tolerance.
struct CertificateReport {
    std::string name;
    bool pass = true;
    bool skipped = false;  // missing metadata or inapplicable precondition
    std::string note;
    double worst = 0.0;
    long worst_index = -1;
    long checked = 0;
    double tolerance = 0.0;

    void record(double residual, long index) {
        if (residual > worst || checked == 0) {
            worst = residual;
            worst_index = index;
        }
        ++checked;
        if (worst > tolerance) pass = false;
    }
};

}  // namespace prox0
