#pragma once

#include <array>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace steklov {

// Star-shaped outer boundary { rho0(theta) (cos theta, sin theta) } given by
// a truncated Fourier series, so the tangential derivative is exact.
struct RadialOutline {
    double a0 = 1.0;
    std::vector<double> cos_coeffs;  // coefficient of cos(k theta), k = 1, 2, ...
    std::vector<double> sin_coeffs;

    double rho(double theta) const;
    double drho(double theta) const;  // d rho0 / d theta
};

struct Polygon {
    std::vector<std::array<double, 2>> vertices;  // counterclockwise
};

// Two unit disks joined by the rectangle (-eps/2, eps/2) x (-eps^3/2, eps^3/2),
// with a concentric hole in the right lobe. Disk centers are placed so that
// the rectangle corners lie exactly on the two circles.
struct Dumbbell {
    double eps = 0.2;

    double lobe_center_x() const;  // right lobe at (+x, 0), left at (-x, 0)
    double junction_half_angle() const;
};

// Positive Robin weight on the inner circle, constant or piecewise constant
// in the polar angle.
class BetaSpec {
public:
    static BetaSpec constant(double value);
    // breakpoints sorted in [0, 2pi); values[i] holds on [breaks[i], breaks[i+1])
    static BetaSpec piecewise(std::vector<double> breaks, std::vector<double> values);

    bool is_constant() const { return breaks_.size() == 1; }
    double value_at(double theta) const;
    double min_value() const;
    double constant_value() const;  // throws unless is_constant()
    double l1_norm(double hole_radius) const;  // m = ||beta||_{L^1(inner circle)}

    const std::vector<double>& breaks() const { return breaks_; }
    const std::vector<double>& values() const { return values_; }

private:
    BetaSpec() = default;
    std::vector<double> breaks_;
    std::vector<double> values_;
};

using Outline = std::variant<RadialOutline, Polygon, Dumbbell>;

// Omega = Omega0 \ closure(B_r), hole centered at the origin (for the
// dumbbell: concentric in the right lobe).
struct AnnularDomain {
    Outline outline;
    double hole_radius = 0.5;

    void validate() const;  // hole strictly inside, outline positive
    bool is_radial() const { return std::holds_alternative<RadialOutline>(outline); }
    const RadialOutline& radial() const;
    std::array<double, 2> hole_center() const;
};

double outer_perimeter(const AnnularDomain& domain);

// (R_m, R_M): min and max of rho0 over [0, 2pi). Radial outlines only.
std::pair<double, double> radial_extremes(const AnnularDomain& domain);

// R_M^{n-1} * max_theta sqrt(1 + (rho0'/rho0)^2) with n = 2; the geometric
// factor in the shell comparison lower bound. Radial outlines only.
double starshape_factor(const AnnularDomain& domain);

// JSON round trip for { outline, hole_radius, beta }.
std::pair<AnnularDomain, BetaSpec> parse_domain_json(const std::string& text);
std::string domain_to_json(const AnnularDomain& domain, const BetaSpec& beta);

}  // namespace steklov
