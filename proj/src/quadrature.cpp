#include "hcma/quadrature.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <string>

#include "hcma/error.hpp"

namespace hcma {

namespace {

void silence_gsl() {
    static std::once_flag flag;
    std::call_once(flag, [] { gsl_set_error_handler_off(); });
}

struct WorkspaceDeleter {
    void operator()(gsl_integration_workspace* w) const { gsl_integration_workspace_free(w); }
};

gsl_integration_workspace* workspace(std::size_t limit) {
    thread_local std::unique_ptr<gsl_integration_workspace, WorkspaceDeleter> ws;
    thread_local std::size_t cap = 0;
    if (!ws || cap < limit) {
        ws.reset(gsl_integration_workspace_alloc(limit));
        cap = limit;
    }
    return ws.get();
}

double trampoline(double x, void* p) {
    return (*static_cast<const std::function<double(double)>*>(p))(x);
}

}  // namespace

QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double tol, std::size_t max_subdivisions) {
    silence_gsl();
    if (!(tol > 0.0)) throw ValidationError("quadrature tolerance must be positive");
    if (max_subdivisions == 0) throw ValidationError("max_subdivisions must be positive");
    QuadResult r;
    if (a == b) return r;
    gsl_function F;
    F.function = &trampoline;
    F.params = const_cast<std::function<double(double)>*>(&f);
    int status = gsl_integration_qag(&F, a, b, tol, 0.0, max_subdivisions, GSL_INTEG_GAUSS21,
                                     workspace(max_subdivisions), &r.value, &r.abserr);
    if (status != GSL_SUCCESS || !std::isfinite(r.value) || r.abserr > tol)
        throw QuadratureFailure("adaptive quadrature on [" + std::to_string(a) + ", " +
                                    std::to_string(b) + "] failed: " + gsl_strerror(status),
                                r.abserr);
    return r;
}

QuadResult integrate_pieces(const std::function<double(double)>& f, std::vector<double> breaks,
                            double tol, std::size_t max_subdivisions) {
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    QuadResult total;
    if (breaks.size() < 2) return total;
    const double piece_tol = tol / static_cast<double>(breaks.size() - 1);
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        QuadResult r = integrate(f, breaks[i], breaks[i + 1], piece_tol, max_subdivisions);
        total.value += r.value;
        total.abserr += r.abserr;
    }
    return total;
}

}  // namespace hcma
