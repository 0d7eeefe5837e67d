#pragma once

#include <span>
#include <variant>
#include <vector>

namespace anscombe {

/// Gaussian prior N(m0, 1/r0) on the standardized effect. r0 == 0 is the
/// improper flat limit; it is only meaningful through the normal_conjugate
/// transformations.
struct NormalConjugate {
    double m0 = 0.0;
    double r0 = 1.0;
};

/// Mass 1/2 at +delta0 and at -delta0 (the maximin prior).
struct SymmetricTwoPoint {
    double delta0 = 1.0;
};

/// Finite mixture of point masses. Continuous priors other than the normal
/// are expected to be discretized by the caller (e.g. by quadrature nodes).
struct DiscreteMixture {
    std::vector<double> points;
    std::vector<double> weights;
};

/// A point mass of a discrete prior.
struct Atom {
    double delta;
    double weight;
};

class Prior {
public:
    using Family = std::variant<NormalConjugate, SymmetricTwoPoint, DiscreteMixture>;

    static Prior normal(double m0, double r0);
    static Prior two_point(double delta0);
    static Prior mixture(std::vector<double> points, std::vector<double> weights);

    const Family& family() const noexcept { return family_; }

    bool is_normal() const noexcept { return std::holds_alternative<NormalConjugate>(family_); }
    bool is_discrete() const noexcept { return !is_normal(); }

    /// Invariant under delta -> -delta. Normal priors are symmetric iff m0 == 0.
    bool is_symmetric() const;

    /// Point masses of a two-point or mixture prior. Throws for normal priors.
    std::vector<Atom> atoms() const;

    /// Mean of the prior (the first moment the model requires to be finite).
    double mean() const;

private:
    explicit Prior(Family f) : family_(std::move(f)) {}
    Family family_;
};

/// h(r, y) = integral of delta * exp(delta y - delta^2 r / 2) against the prior.
///
/// For discrete priors this is the exact sum over atoms. For the normal family
/// the value is m_r(y) * beta(r, y), i.e. the exact integral divided by
/// sqrt(r0) * exp(-r0 m0^2 / 2); everything derived from h (decisions,
/// boundaries) is invariant under this positive factor. Use h_scale() to
/// recover the exact normalization.
///
/// Throws ErrorKind::Singular for an improper normal prior (r0 == 0) at r == 0.
double h_xi(const Prior& prior, double r, double y);

/// Factor c with exact_h = c * h_xi. 1 for discrete priors; throws
/// ErrorKind::Singular for the improper normal prior.
double h_scale(const Prior& prior);

/// Terminal treatment choice: +1 when h_xi(r, y) >= 0, else -1.
int optimal_decision(const Prior& prior, double r, double y);

/// Map between clinical units (mu, t, x) and standardized units (delta, r, y).
struct StandardizedScaling {
    double sigma = 1.0;         ///< response standard deviation
    double horizon_mean = 1.0;  ///< N for a fixed horizon, E[N] for a random one

    static StandardizedScaling make(double sigma, double horizon_mean);
};

struct ClinicalPoint {
    double mu;  ///< half the incremental effect
    double t;   ///< patients treated so far
    double x;   ///< difference of response sums
};

struct StandardizedPoint {
    double delta;
    double r;
    double y;
};

StandardizedPoint to_standardized(const StandardizedScaling& s, const ClinicalPoint& p);
ClinicalPoint from_standardized(const StandardizedScaling& s, const StandardizedPoint& p);

}  // namespace anscombe
