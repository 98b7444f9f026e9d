#include "subou/subordinator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "subou/errors.hpp"

namespace subou {

const char* family_name(Family f) noexcept {
    switch (f) {
        case Family::no_jumps: return "none";
        case Family::tempered_stable: return "tempered_stable";
        case Family::compound_poisson_exp: return "compound_poisson_exp";
        case Family::inverse_gaussian: return "inverse_gaussian";
        case Family::gamma: return "gamma";
    }
    return "unknown";
}

Family family_from_name(const std::string& name) {
    if (name == "none") return Family::no_jumps;
    if (name == "tempered_stable") return Family::tempered_stable;
    if (name == "compound_poisson_exp") return Family::compound_poisson_exp;
    if (name == "inverse_gaussian") return Family::inverse_gaussian;
    if (name == "gamma") return Family::gamma;
    throw UnsupportedFamilyError("unknown subordinator family '" + name + "'");
}

SubordinatorSpec SubordinatorSpec::drift_only(double gamma) {
    SubordinatorSpec s;
    s.gamma = gamma;
    s.validate();
    return s;
}

SubordinatorSpec SubordinatorSpec::tempered_stable(double gamma, double c, double p, double eta) {
    SubordinatorSpec s;
    s.gamma = gamma;
    s.family = Family::tempered_stable;
    s.c = c;
    s.p = p;
    s.eta = eta;
    s.validate();
    return s;
}

SubordinatorSpec SubordinatorSpec::compound_poisson_exp(double gamma, double alpha, double eta_j) {
    SubordinatorSpec s;
    s.gamma = gamma;
    s.family = Family::compound_poisson_exp;
    s.alpha = alpha;
    s.eta = eta_j;
    s.p = -1.0;
    s.validate();
    return s;
}

SubordinatorSpec SubordinatorSpec::inverse_gaussian(double gamma, double mu, double nu_ig) {
    SubordinatorSpec s;
    s.gamma = gamma;
    s.family = Family::inverse_gaussian;
    s.mu = mu;
    s.nu_ig = nu_ig;
    s.p = 0.5;
    s.validate();
    return s;
}

SubordinatorSpec SubordinatorSpec::gamma_process(double gamma, double c, double eta) {
    SubordinatorSpec s;
    s.gamma = gamma;
    s.family = Family::gamma;
    s.c = c;
    s.eta = eta;
    s.p = 0.0;
    s.validate();
    return s;
}

bool SubordinatorSpec::infinite_activity() const noexcept {
    switch (family) {
        case Family::no_jumps:
        case Family::compound_poisson_exp: return false;
        case Family::inverse_gaussian:
        case Family::gamma: return true;
        case Family::tempered_stable: return p >= 0.0;
    }
    return false;
}

TemperedStableParams SubordinatorSpec::ts() const {
    switch (family) {
        case Family::no_jumps: return {0.0, 0.0, 0.0};
        case Family::tempered_stable: return {c, p, eta};
        case Family::gamma: return {c, 0.0, eta};
        case Family::compound_poisson_exp: return {alpha * eta, -1.0, eta};
        case Family::inverse_gaussian: {
            // Matching phi'(0) = mu and -phi''(0) = nu_ig.
            const double e = mu / (2.0 * nu_ig);
            return {mu * std::sqrt(e) / std::sqrt(std::numbers::pi), 0.5, e};
        }
    }
    return {};
}

void SubordinatorSpec::validate() const {
    if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw DomainError("subordinator drift gamma must be >= 0");
    switch (family) {
        case Family::no_jumps: break;
        case Family::tempered_stable:
            if (!(c > 0.0) || !(p < 1.0) || !(eta >= 0.0))
                throw DomainError("tempered stable requires C > 0, p < 1, eta >= 0");
            if (eta == 0.0 && !(p > 0.0)) throw DomainError("stable case eta = 0 requires 0 < p < 1");
            break;
        case Family::gamma:
            if (!(c > 0.0) || !(eta > 0.0)) throw DomainError("gamma subordinator requires C > 0, eta > 0");
            break;
        case Family::compound_poisson_exp:
            if (!(alpha > 0.0) || !(eta > 0.0))
                throw DomainError("compound Poisson requires alpha > 0, eta > 0");
            break;
        case Family::inverse_gaussian:
            if (!(mu > 0.0) || !(nu_ig > 0.0)) throw DomainError("inverse Gaussian requires mu > 0, nu > 0");
            break;
    }
}

double laplace_exponent(const SubordinatorSpec& spec, double lambda) {
    if (!(lambda >= 0.0)) throw DomainError("laplace_exponent: lambda must be >= 0");
    double jump = 0.0;
    switch (spec.family) {
        case Family::no_jumps: break;
        case Family::gamma: jump = spec.c * std::log1p(lambda / spec.eta); break;
        case Family::compound_poisson_exp: jump = spec.alpha * lambda / (lambda + spec.eta); break;
        case Family::inverse_gaussian: {
            // (mu^2/nu)(sqrt(1 + 2 nu lambda / mu) - 1), written without cancellation.
            const double u = 2.0 * spec.nu_ig * lambda / spec.mu;
            jump = (spec.mu * spec.mu / spec.nu_ig) * u / (std::sqrt(1.0 + u) + 1.0);
            break;
        }
        case Family::tempered_stable: {
            const double p = spec.p;
            if (p == 0.0) {
                jump = spec.c * std::log1p(lambda / spec.eta);
            } else if (spec.eta == 0.0) {
                jump = -spec.c * std::tgamma(-p) * std::pow(lambda, p);
            } else {
                const double diff = std::pow(spec.eta, p) * std::expm1(p * std::log1p(lambda / spec.eta));
                jump = -spec.c * std::tgamma(-p) * diff;
            }
            break;
        }
    }
    return spec.gamma * lambda + jump;
}

double levy_density(const SubordinatorSpec& spec, double s) {
    if (!(s > 0.0)) throw DomainError("levy_density: s must be > 0");
    if (!spec.has_jumps()) return 0.0;
    const auto t = spec.ts();
    return t.c * std::pow(s, -1.0 - t.p) * std::exp(-t.eta * s);
}

double bg_index(const SubordinatorSpec& spec) {
    if (!spec.has_jumps()) return 0.0;
    return std::max(spec.ts().p, 0.0);
}

namespace {

// Michael-Schucany-Haas transformation for IG(mean m, shape l).
double sample_inverse_gaussian(double m, double l, Rng& rng) {
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> unif;
    const double v = normal(rng);
    const double y = v * v;
    const double my = m * y;
    // Smaller root m + m^2 y/(2l) - (m/(2l)) sqrt(4 m l y + m^2 y^2), rationalized.
    const double x = 2.0 * l * m / (2.0 * l + my + std::sqrt(4.0 * m * l * y + my * my));
    if (unif(rng) <= m / (m + x)) return x;
    return m * m / x;
}

}  // namespace

double sample_increment(const SubordinatorSpec& spec, double dt, Rng& rng) {
    if (!(dt > 0.0)) throw DomainError("sample_increment: dt must be > 0");
    double jump = 0.0;
    switch (spec.family) {
        case Family::no_jumps: break;
        case Family::inverse_gaussian: {
            const double m = spec.mu * dt;
            const double l = spec.mu * spec.mu * spec.mu * dt * dt / spec.nu_ig;
            jump = sample_inverse_gaussian(m, l, rng);
            break;
        }
        case Family::gamma:
            jump = std::gamma_distribution<double>(spec.c * dt, 1.0 / spec.eta)(rng);
            break;
        case Family::compound_poisson_exp: {
            const long n = std::poisson_distribution<long>(spec.alpha * dt)(rng);
            std::exponential_distribution<double> size(spec.eta);
            for (long i = 0; i < n; ++i) jump += size(rng);
            break;
        }
        case Family::tempered_stable: {
            const double p = spec.p;
            if (p == 0.0) {
                jump = std::gamma_distribution<double>(spec.c * dt, 1.0 / spec.eta)(rng);
            } else if (p == -1.0) {
                const long n = std::poisson_distribution<long>(spec.c / spec.eta * dt)(rng);
                std::exponential_distribution<double> size(spec.eta);
                for (long i = 0; i < n; ++i) jump += size(rng);
            } else if (p == 0.5 && spec.eta > 0.0) {
                // IG with eta = mu/(2 nu), C = mu sqrt(eta/pi).
                const double mu = spec.c * std::sqrt(std::numbers::pi / spec.eta);
                const double nu = mu / (2.0 * spec.eta);
                jump = sample_inverse_gaussian(mu * dt, mu * mu * mu * dt * dt / nu, rng);
            } else {
                throw UnsupportedFamilyError("sampling is implemented for tempered stable p in {-1, 0, 1/2} only");
            }
            break;
        }
    }
    return spec.gamma * dt + jump;
}

}  // namespace subou
