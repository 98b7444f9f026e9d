#pragma once

#include <random>
#include <string>

namespace subou {

using Rng = std::mt19937_64;

enum class Family {
    no_jumps,              // pure drift, nu == 0
    tempered_stable,       // C s^{-1-p} e^{-eta s}
    compound_poisson_exp,  // rate alpha, Exp(eta_j) jump sizes; tempered stable with p = -1
    inverse_gaussian,      // mean rate mu, variance rate nu_ig; tempered stable with p = 1/2
    gamma,                 // tempered stable with p = 0
};

const char* family_name(Family f) noexcept;
Family family_from_name(const std::string& name);

// Tempered-stable view (C, p, eta) of any jump family.
struct TemperedStableParams {
    double c = 0.0;
    double p = 0.0;
    double eta = 0.0;
};

struct SubordinatorSpec {
    double gamma = 0.0;
    Family family = Family::no_jumps;
    // Native parameters. Only the ones belonging to `family` are meaningful:
    //   tempered_stable / gamma: c, p, eta
    //   compound_poisson_exp:    alpha, eta
    //   inverse_gaussian:        mu, nu_ig
    double c = 0.0;
    double p = 0.0;
    double eta = 0.0;
    double alpha = 0.0;
    double mu = 0.0;
    double nu_ig = 0.0;

    static SubordinatorSpec drift_only(double gamma);
    static SubordinatorSpec tempered_stable(double gamma, double c, double p, double eta);
    static SubordinatorSpec compound_poisson_exp(double gamma, double alpha, double eta_j);
    static SubordinatorSpec inverse_gaussian(double gamma, double mu, double nu_ig);
    static SubordinatorSpec gamma_process(double gamma, double c, double eta);

    [[nodiscard]] bool has_jumps() const noexcept { return family != Family::no_jumps; }
    [[nodiscard]] bool infinite_activity() const noexcept;
    [[nodiscard]] TemperedStableParams ts() const;
    // Throws DomainError when the parameters leave the family's domain.
    void validate() const;
};

// phi(lambda) with E[exp(-lambda T_t)] = exp(-t phi(lambda)).
double laplace_exponent(const SubordinatorSpec& spec, double lambda);
double levy_density(const SubordinatorSpec& spec, double s);
double bg_index(const SubordinatorSpec& spec);

// Exact draw of T_{t+dt} - T_t.
double sample_increment(const SubordinatorSpec& spec, double dt, Rng& rng);

}  // namespace subou
