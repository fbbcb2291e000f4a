#include "stable_stein/bounds.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "json.hpp"

#include "stable_stein/errors.hpp"
#include "stable_stein/sample_batch.hpp"
#include "stable_stein/special.hpp"

namespace stable_stein {

namespace {

constexpr double kPi = std::numbers::pi;

void check_alpha_delta(double alpha, double delta) {
    if (!(alpha > 1.0) || !(alpha < 2.0))
        throw InvalidLaw("alpha must lie in (1,2)");
    if (!(delta >= -1.0) || !(delta <= 1.0))
        throw InvalidLaw("delta must lie in [-1,1]");
}

// shared factor of eta3 and eta4
double eta_bracket(double alpha) {
    return 4.0 * alpha + 2.0 * std::pow(alpha, (2.0 * alpha - 2.0) / alpha) - 1.0;
}

}  // namespace

EtaConstants eta_constants(double alpha, double delta, bool include_eta4) {
    check_alpha_delta(alpha, delta);
    EtaConstants out;
    const double t = tan_half_pi(alpha);
    const double dt = delta * t;

    const double e1_a = gamma_fn(1.0 / alpha) / (kPi * alpha);
    const double e1_b =
        (alpha - 1.0) * (1.0 + dt) * (2.0 + dt) * gamma_fn((alpha - 1.0) / alpha) / kPi;
    if (e1_b <= 0.0)
        out.warnings.push_back("eta1 second max-branch nonpositive (" +
                               format_double(e1_b) + "), signed tan(pi alpha/2)");
    out.eta1 = std::max(e1_a, e1_b);

    const double e2_a = gamma_fn(2.0 / alpha) / (kPi * alpha);
    const double e2_b = (1.0 + dt) * (1.0 + 2.0 * alpha + alpha * dt) / kPi;
    if (e2_b <= 0.0)
        out.warnings.push_back("eta2 second max-branch nonpositive (" +
                               format_double(e2_b) + "), signed tan(pi alpha/2)");
    out.eta2 = beta_fn(2.0 / alpha, 1.0 - 1.0 / alpha) * std::max(e2_a, e2_b);

    out.eta3 = eta_bracket(alpha) * out.eta1 / (alpha - 1.0);

    if (include_eta4) {
        const double e4_a = gamma_fn(1.0 / alpha) / alpha;
        const double e4_b = alpha * std::pow(2.0, alpha - 1.0) *
                            std::sin(alpha * kPi / 2.0) * gamma_fn((1.0 + alpha) / 2.0) *
                            gamma_fn(alpha / 2.0) / std::pow(kPi, 1.5);
        out.eta4 = std::max(e4_a, e4_b) * eta_bracket(alpha) / (alpha - 1.0);
    }
    return out;
}

GammaRegime classify_gamma(double alpha, double gamma, std::string* note) {
    const double edge = 2.0 - alpha;
    if (gamma == 0.0) return GammaRegime::zero;
    if (gamma == edge) return GammaRegime::boundary;
    if (std::abs(gamma - edge) <= 1e-12) {
        if (note)
            *note = "gamma = " + format_double(gamma) + " within 1e-12 of 2-alpha = " +
                    format_double(edge) + "; treated as the boundary case";
        return GammaRegime::boundary;
    }
    return gamma > edge ? GammaRegime::above : GammaRegime::below;
}

std::string regime_label(GammaRegime r) {
    switch (r) {
        case GammaRegime::above: return "gamma>2-alpha";
        case GammaRegime::boundary: return "gamma=2-alpha";
        case GammaRegime::below: return "0<gamma<2-alpha";
        case GammaRegime::zero: return "gamma=0";
    }
    return "?";
}

double rate_Rn(double alpha, double gamma, double sigma, double n,
               std::optional<double> B_integral, std::optional<double> B_sup_tail) {
    if (!(n >= 1.0)) throw std::invalid_argument("n must be >= 1");
    switch (classify_gamma(alpha, gamma)) {
        case GammaRegime::above:
            return std::pow(n, 1.0 - 2.0 / alpha);
        case GammaRegime::boundary:
            return std::pow(n, 1.0 - 2.0 / alpha) *
                   std::abs(std::log(sigma * std::pow(n, 1.0 / alpha)));
        case GammaRegime::below:
            return std::pow(n, -(alpha - 1.0) * gamma / (alpha * (1.0 - gamma)));
        case GammaRegime::zero: {
            if (!B_integral || !B_sup_tail)
                throw MissingBData("gamma = 0 needs B_integral and B_sup_tail");
            const double base = std::pow(n, 1.0 - 2.0 / alpha);
            return base + base * *B_integral + std::pow(*B_sup_tail, alpha - 1.0);
        }
    }
    throw std::logic_error("unreachable");
}

namespace {

struct CommonTerms {
    double eta2;
    double frac_term;  // the E|X-EX|^(2-alpha) prefix without its numeric factor
    double mean_term;  // E|X| |EX| / sigma^2
    double two_a;      // (2A)^(2/alpha)
};

CommonTerms common_terms(const BoundInputs& in, const EtaConstants& eta) {
    CommonTerms ct;
    ct.eta2 = eta.eta2;
    const double alpha = in.law.alpha;
    ct.frac_term = in.d_alpha * in.moments.frac_central /
                   ((2.0 - alpha) * (alpha - 1.0) * std::pow(in.sigma, 2.0 - alpha));
    ct.mean_term =
        in.moments.abs_mean * std::abs(in.moments.mean) / (in.sigma * in.sigma);
    ct.two_a = std::pow(2.0 * in.law.A, 2.0 / alpha);
    return ct;
}

}  // namespace

double const_c1(const BoundInputs& in) {
    const double alpha = in.law.alpha;
    const double gamma = in.law.gamma;
    const double A = in.law.A, L = in.law.L;
    const double s2 = in.sigma * in.sigma;
    const EtaConstants eta = eta_constants(alpha, in.law.delta, false);
    const CommonTerms ct = common_terms(in, eta);

    const double head = (16.0 * ct.frac_term + 12.0 * ct.mean_term) * eta.eta2;

    double tail = 0.0;
    switch (classify_gamma(alpha, gamma)) {
        case GammaRegime::above:
            tail = 8.0 * ct.two_a / s2 *
                   (2.0 / (2.0 - alpha) +
                    2.0 * L / (alpha + gamma - 2.0) *
                        std::pow(2.0 * A, -(alpha + gamma) / alpha)) *
                   eta.eta2;
            break;
        case GammaRegime::boundary:
            tail = (4.0 * (4.0 * ct.two_a / (2.0 - alpha) + 8.0 * L / (alpha - 1.0)) *
                        eta.eta2 +
                    (8.0 * alpha * alpha * (A + L) - 4.0 * L) / (alpha - 1.0)) /
                   s2;
            break;
        case GammaRegime::below:
            tail = std::pow(in.sigma, (alpha - gamma) / (gamma - 1.0)) *
                   (4.0 *
                        (4.0 * ct.two_a / (2.0 - alpha) +
                         8.0 * L / (2.0 - alpha - gamma)) *
                        eta.eta2 +
                    (8.0 * alpha * alpha * (A + L) - 4.0 * L) / (alpha - 1.0));
            break;
        case GammaRegime::zero: {
            if (!in.B_integral || !in.B_sup_tail)
                throw MissingBData("gamma = 0 needs B_integral and B_sup_tail");
            const double sa = std::pow(in.sigma, alpha);
            const double m1 = 2.0 * alpha * ct.two_a / ((2.0 - alpha) * s2);
            const double m2 = 4.0 / s2;
            const double m3 = 8.0 / ((2.0 - alpha) * sa) + 2.0 * ct.two_a / sa +
                              (8.0 * alpha * alpha * (A + L) - 4.0 * L) /
                                  (4.0 * (alpha - 1.0) * eta.eta2 * sa);
            tail = 4.0 * std::max({m1, m2, m3}) * eta.eta2;
            break;
        }
    }
    return head + tail;
}

std::pair<double, std::optional<double>> const_c2M_c3M(const BoundInputs& in) {
    if (!in.M || !(*in.M > 0.0))
        throw std::invalid_argument("non-uniform constants need a strike M > 0");
    const double alpha = in.law.alpha;
    const double gamma = in.law.gamma;
    const double A = in.law.A, L = in.law.L;
    const double M = *in.M;
    const double s2 = in.sigma * in.sigma;
    const EtaConstants eta = eta_constants(alpha, in.law.delta, true);
    const CommonTerms ct = common_terms(in, eta);
    const GammaRegime regime = classify_gamma(alpha, gamma);

    // exponent of M in the c2 family and in the improved delta=0 family
    const double e2 = 2.0 * (alpha - 1.0) / (3.0 * alpha - 1.0);
    const double e3 = (alpha * alpha - 1.0) / (alpha * alpha + 2.0 * alpha - 1.0);

    auto assemble = [&](double eta_reg, double q, double m_exp,
                        double boundary_log_coef) {
        double val = (4.0 * ct.frac_term + 3.0 * ct.mean_term) * eta_reg *
                     std::pow(M, -m_exp);
        switch (regime) {
            case GammaRegime::above:
                val += eta_reg * 2.0 * ct.two_a / s2 *
                       (2.0 / (2.0 - alpha) +
                        2.0 * L / (alpha + gamma - 2.0) *
                            std::pow(2.0 * A, -(alpha + gamma) / alpha)) *
                       std::pow(M, -m_exp);
                break;
            case GammaRegime::boundary:
                val += eta_reg / s2 *
                       ((4.0 * ct.two_a / (2.0 - alpha) + 8.0 * L / (alpha - 1.0)) + q) *
                       boundary_log_coef * std::log(M) * std::pow(M, -m_exp);
                break;
            case GammaRegime::below:
                val += eta_reg * std::pow(in.sigma, (alpha - gamma) / (gamma - 1.0)) *
                       ((4.0 * ct.two_a / (2.0 - alpha) +
                         8.0 * L / (2.0 - alpha - gamma)) +
                        q) *
                       std::pow(M, -m_exp * (alpha - 1.0) / (1.0 - gamma));
                break;
            case GammaRegime::zero: {
                const double sa = std::pow(in.sigma, alpha);
                const double m1 = 2.0 * alpha * ct.two_a / ((2.0 - alpha) * s2);
                const double m2 = 4.0 / s2;
                const double m3 =
                    8.0 / ((2.0 - alpha) * sa) + 2.0 * ct.two_a / sa + q;
                val += eta_reg * std::max({m1, m2, m3}) *
                       std::pow(M, -m_exp * (alpha - 1.0));
                break;
            }
        }
        return val;
    };

    const double q1 =
        (8.0 * alpha * alpha * (A + L) - 4.0 * alpha * L) / ((alpha - 1.0) * eta.eta3);
    const double c2 = assemble(eta.eta3, q1, e2,
                               2.0 * (alpha - 1.0) / (3.0 * alpha - 1.0));

    std::optional<double> c3;
    if (in.law.delta == 0.0) {
        const double q2 = (8.0 * alpha * alpha * (A + L) - 4.0 * alpha * L) /
                          ((alpha - 1.0) * *eta.eta4);
        c3 = assemble(*eta.eta4, q2, e3,
                      (alpha * alpha - 1.0) / (alpha * alpha + 2.0 * alpha - 1.0));
    }
    return {c2, c3};
}

BoundInputs make_bound_inputs(const AttractionLaw& law, double n,
                              std::optional<double> M) {
    BoundInputs in;
    in.law = law;
    in.n = n;
    in.M = M;
    in.moments = mean_and_fractional_moments(law);
    const StableScale sc = sigma_norm(law);
    in.sigma = sc.sigma;
    in.d_alpha = sc.d_alpha;
    if (classify_gamma(law.alpha, law.gamma) == GammaRegime::zero) {
        const double threshold = sc.sigma * std::pow(n, 1.0 / law.alpha);
        const BTailData bd = compute_b_data(law, threshold);
        in.B_integral = bd.weighted_integral;
        in.B_sup_tail = bd.sup_beyond;
    }
    return in;
}

BoundReport assemble_report(const BoundInputs& in) {
    BoundReport rep;
    const double alpha = in.law.alpha;
    rep.alpha = alpha;
    rep.delta = in.law.delta;
    rep.gamma = in.law.gamma;
    rep.n = in.n;
    rep.M = in.M;
    rep.sigma = in.sigma;
    rep.d_alpha = in.d_alpha;

    std::string note;
    const GammaRegime regime = classify_gamma(alpha, in.law.gamma, &note);
    rep.regime = regime_label(regime);
    if (!note.empty()) rep.notes.push_back(note);

    EtaConstants eta = eta_constants(alpha, in.law.delta, true);
    rep.eta1 = eta.eta1;
    rep.eta2 = eta.eta2;
    rep.eta3 = eta.eta3;
    rep.eta4 = *eta.eta4;
    rep.warnings = std::move(eta.warnings);
    rep.q1 = (8.0 * alpha * alpha * (in.law.A + in.law.L) - 4.0 * alpha * in.law.L) /
             ((alpha - 1.0) * rep.eta3);
    rep.q2 = (8.0 * alpha * alpha * (in.law.A + in.law.L) - 4.0 * alpha * in.law.L) /
             ((alpha - 1.0) * rep.eta4);

    rep.Rn = rate_Rn(alpha, in.law.gamma, in.sigma, in.n, in.B_integral, in.B_sup_tail);
    if (regime == GammaRegime::boundary) {
        // no continuity claim at the boundary: record the flanking regimes
        rep.notes.push_back(
            "Rn if treated as gamma>2-alpha: " +
            format_double(std::pow(in.n, 1.0 - 2.0 / alpha)) +
            "; as gamma<2-alpha: " +
            format_double(std::pow(in.n, -(alpha - 1.0) * in.law.gamma /
                                             (alpha * (1.0 - in.law.gamma)))));
    }

    rep.c1 = const_c1(in);
    rep.uniform_bound = rep.c1 * rep.Rn;
    if (in.M) {
        auto [c2, c3] = const_c2M_c3M(in);
        rep.c2M = c2;
        rep.c3M = c3;
        double best = c2;
        if (c3) best = std::min(best, *c3);
        rep.nonuniform_bound = best * rep.Rn;
    }
    return rep;
}

std::string report_to_json(const BoundReport& rep) {
    nlohmann::ordered_json j;
    j["eta1"] = rep.eta1;
    j["eta2"] = rep.eta2;
    j["eta3"] = rep.eta3;
    j["eta4"] = rep.eta4;
    j["q1"] = rep.q1;
    j["q2"] = rep.q2;
    j["Rn"] = rep.Rn;
    j["c1"] = rep.c1;
    if (rep.c2M) j["c2M"] = *rep.c2M;
    if (rep.c3M) j["c3M"] = *rep.c3M;
    j["uniform_bound"] = rep.uniform_bound;
    if (rep.nonuniform_bound) j["nonuniform_bound"] = *rep.nonuniform_bound;
    j["regime"] = rep.regime;
    j["alpha"] = rep.alpha;
    j["delta"] = rep.delta;
    j["gamma"] = rep.gamma;
    j["n"] = rep.n;
    if (rep.M) j["M"] = *rep.M;
    j["sigma"] = rep.sigma;
    j["d_alpha"] = rep.d_alpha;
    j["warnings"] = rep.warnings;
    j["notes"] = rep.notes;
    return j.dump(2);
}

}  // namespace stable_stein
