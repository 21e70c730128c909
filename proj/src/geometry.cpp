#include "steklov/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "json.hpp"

namespace steklov {

using std::numbers::pi;

double RadialOutline::rho(double theta) const {
    double v = a0;
    for (std::size_t k = 0; k < cos_coeffs.size(); ++k)
        v += cos_coeffs[k] * std::cos((k + 1) * theta);
    for (std::size_t k = 0; k < sin_coeffs.size(); ++k)
        v += sin_coeffs[k] * std::sin((k + 1) * theta);
    return v;
}

double RadialOutline::drho(double theta) const {
    double v = 0.0;
    for (std::size_t k = 0; k < cos_coeffs.size(); ++k)
        v -= (k + 1) * cos_coeffs[k] * std::sin((k + 1) * theta);
    for (std::size_t k = 0; k < sin_coeffs.size(); ++k)
        v += (k + 1) * sin_coeffs[k] * std::cos((k + 1) * theta);
    return v;
}

double Dumbbell::lobe_center_x() const {
    return eps / 2.0 + std::sqrt(1.0 - std::pow(eps, 6) / 4.0);
}

double Dumbbell::junction_half_angle() const {
    return std::asin(eps * eps * eps / 2.0);
}

BetaSpec BetaSpec::constant(double value) {
    if (!(value > 0.0)) throw std::invalid_argument("beta must be > 0");
    BetaSpec b;
    b.breaks_ = {0.0};
    b.values_ = {value};
    return b;
}

BetaSpec BetaSpec::piecewise(std::vector<double> breaks, std::vector<double> values) {
    if (breaks.empty() || breaks.size() != values.size())
        throw std::invalid_argument("piecewise beta: breaks/values size mismatch");
    if (!std::is_sorted(breaks.begin(), breaks.end()))
        throw std::invalid_argument("piecewise beta: breakpoints must be sorted");
    if (breaks.front() < 0.0 || breaks.back() >= 2.0 * pi)
        throw std::invalid_argument("piecewise beta: breakpoints must lie in [0, 2pi)");
    for (double v : values)
        if (!(v > 0.0)) throw std::invalid_argument("beta must be > 0 everywhere");
    BetaSpec b;
    b.breaks_ = std::move(breaks);
    b.values_ = std::move(values);
    return b;
}

double BetaSpec::value_at(double theta) const {
    double t = std::fmod(theta, 2.0 * pi);
    if (t < 0.0) t += 2.0 * pi;
    if (t < breaks_.front()) return values_.back();  // wrap-around segment
    auto it = std::upper_bound(breaks_.begin(), breaks_.end(), t);
    return values_[static_cast<std::size_t>(it - breaks_.begin()) - 1];
}

double BetaSpec::min_value() const {
    return *std::min_element(values_.begin(), values_.end());
}

double BetaSpec::constant_value() const {
    if (!is_constant())
        throw std::logic_error("constant_value called on a piecewise beta");
    return values_.front();
}

double BetaSpec::l1_norm(double hole_radius) const {
    if (!(hole_radius > 0.0)) throw std::invalid_argument("hole radius must be > 0");
    double sum = 0.0;
    for (std::size_t i = 0; i < breaks_.size(); ++i) {
        const double next = (i + 1 < breaks_.size()) ? breaks_[i + 1] : breaks_.front() + 2.0 * pi;
        sum += values_[i] * (next - breaks_[i]);
    }
    return hole_radius * sum;
}

void AnnularDomain::validate() const {
    if (!(hole_radius > 0.0)) throw std::invalid_argument("hole radius must be > 0");
    if (const auto* radial = std::get_if<RadialOutline>(&outline)) {
        constexpr int kSamples = 4096;
        for (int i = 0; i < kSamples; ++i) {
            const double rho = radial->rho(2.0 * pi * i / kSamples);
            if (!(rho > 0.0)) throw std::invalid_argument("outline radius must stay positive");
            if (!(rho > hole_radius))
                throw std::invalid_argument("hole must lie strictly inside the outline");
        }
    } else if (const auto* poly = std::get_if<Polygon>(&outline)) {
        if (poly->vertices.size() < 3)
            throw std::invalid_argument("polygon needs at least 3 vertices");
        for (const auto& v : poly->vertices)
            if (std::hypot(v[0], v[1]) <= hole_radius)
                throw std::invalid_argument("hole must lie strictly inside the polygon");
    } else {
        const auto& db = std::get<Dumbbell>(outline);
        if (!(db.eps > 0.0) || db.eps > 0.5)
            throw std::invalid_argument("dumbbell eps must lie in (0, 0.5]");
        if (!(hole_radius < 1.0))
            throw std::invalid_argument("dumbbell hole radius must be < 1");
    }
}

const RadialOutline& AnnularDomain::radial() const {
    const auto* r = std::get_if<RadialOutline>(&outline);
    if (!r) throw std::invalid_argument("operation requires a radial outline");
    return *r;
}

std::array<double, 2> AnnularDomain::hole_center() const {
    if (const auto* db = std::get_if<Dumbbell>(&outline))
        return {db->lobe_center_x(), 0.0};
    return {0.0, 0.0};
}

namespace {

// Periodic trapezoid rule with doubling; spectrally accurate for the smooth
// Fourier outlines used here.
template <typename F>
double periodic_integral(F&& f, double rel_tol) {
    int n = 64;
    auto eval = [&](int m) {
        double s = 0.0;
        for (int i = 0; i < m; ++i) s += f(2.0 * pi * i / m);
        return s * 2.0 * pi / m;
    };
    double prev = eval(n);
    for (int iter = 0; iter < 16; ++iter) {
        n *= 2;
        const double cur = eval(n);
        if (std::abs(cur - prev) <= rel_tol * std::abs(cur)) return cur;
        prev = cur;
    }
    return prev;
}

// Grid scan plus golden-section refinement of a smooth periodic function.
template <typename F>
double periodic_extremum(F&& f, bool maximize) {
    constexpr int kSamples = 4096;
    const double sign = maximize ? -1.0 : 1.0;
    double best = sign * f(0.0);
    int best_i = 0;
    for (int i = 1; i < kSamples; ++i) {
        const double v = sign * f(2.0 * pi * i / kSamples);
        if (v < best) {
            best = v;
            best_i = i;
        }
    }
    double a = 2.0 * pi * (best_i - 1) / kSamples;
    double b = 2.0 * pi * (best_i + 1) / kSamples;
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = sign * f(c), fd = sign * f(d);
    for (int it = 0; it < 80; ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = sign * f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = sign * f(d);
        }
    }
    return sign * std::min(fc, fd);
}

}  // namespace

double outer_perimeter(const AnnularDomain& domain) {
    if (const auto* radial = std::get_if<RadialOutline>(&domain.outline)) {
        return periodic_integral(
            [&](double t) {
                const double rho = radial->rho(t);
                const double d = radial->drho(t);
                return std::sqrt(rho * rho + d * d);
            },
            1e-10);
    }
    if (const auto* poly = std::get_if<Polygon>(&domain.outline)) {
        double sum = 0.0;
        const auto& v = poly->vertices;
        for (std::size_t i = 0; i < v.size(); ++i) {
            const auto& a = v[i];
            const auto& b = v[(i + 1) % v.size()];
            sum += std::hypot(b[0] - a[0], b[1] - a[1]);
        }
        return sum;
    }
    const auto& db = std::get<Dumbbell>(domain.outline);
    const double alpha = db.junction_half_angle();
    return 2.0 * (2.0 * pi - 2.0 * alpha) + 2.0 * db.eps;
}

std::pair<double, double> radial_extremes(const AnnularDomain& domain) {
    const auto& outline = domain.radial();
    auto rho = [&](double t) { return outline.rho(t); };
    return {periodic_extremum(rho, false), periodic_extremum(rho, true)};
}

double starshape_factor(const AnnularDomain& domain) {
    const auto& outline = domain.radial();
    const double r_max = radial_extremes(domain).second;
    const double slope = periodic_extremum(
        [&](double t) {
            const double ratio = outline.drho(t) / outline.rho(t);
            return std::sqrt(1.0 + ratio * ratio);
        },
        true);
    return r_max * slope;  // n = 2: R_M^{n-1} = R_M
}

std::pair<AnnularDomain, BetaSpec> parse_domain_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    AnnularDomain domain;
    const auto& jo = j.at("outline");
    const std::string type = jo.at("type").get<std::string>();
    if (type == "radial") {
        RadialOutline outline;
        outline.a0 = jo.at("a0").get<double>();
        if (jo.contains("cos")) outline.cos_coeffs = jo["cos"].get<std::vector<double>>();
        if (jo.contains("sin")) outline.sin_coeffs = jo["sin"].get<std::vector<double>>();
        domain.outline = std::move(outline);
    } else if (type == "polygon") {
        Polygon poly;
        for (const auto& v : jo.at("vertices"))
            poly.vertices.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
        domain.outline = std::move(poly);
    } else if (type == "dumbbell") {
        domain.outline = Dumbbell{jo.at("eps").get<double>()};
    } else {
        throw std::invalid_argument("unknown outline type: " + type);
    }
    domain.hole_radius = j.at("hole_radius").get<double>();
    domain.validate();

    BetaSpec beta = BetaSpec::constant(1.0);
    if (j.contains("beta")) {
        const auto& jb = j.at("beta");
        const std::string btype = jb.at("type").get<std::string>();
        if (btype == "constant") {
            beta = BetaSpec::constant(jb.at("value").get<double>());
        } else if (btype == "piecewise") {
            beta = BetaSpec::piecewise(jb.at("breaks").get<std::vector<double>>(),
                                       jb.at("values").get<std::vector<double>>());
        } else {
            throw std::invalid_argument("unknown beta type: " + btype);
        }
    }
    return {std::move(domain), std::move(beta)};
}

std::string domain_to_json(const AnnularDomain& domain, const BetaSpec& beta) {
    nlohmann::json j;
    if (const auto* radial = std::get_if<RadialOutline>(&domain.outline)) {
        j["outline"] = {{"type", "radial"},
                        {"a0", radial->a0},
                        {"cos", radial->cos_coeffs},
                        {"sin", radial->sin_coeffs}};
    } else if (const auto* poly = std::get_if<Polygon>(&domain.outline)) {
        auto verts = nlohmann::json::array();
        for (const auto& v : poly->vertices) verts.push_back({v[0], v[1]});
        j["outline"] = {{"type", "polygon"}, {"vertices", verts}};
    } else {
        j["outline"] = {{"type", "dumbbell"}, {"eps", std::get<Dumbbell>(domain.outline).eps}};
    }
    j["hole_radius"] = domain.hole_radius;
    if (beta.is_constant()) {
        j["beta"] = {{"type", "constant"}, {"value", beta.constant_value()}};
    } else {
        j["beta"] = {{"type", "piecewise"}, {"breaks", beta.breaks()}, {"values", beta.values()}};
    }
    return j.dump(2);
}

}  // namespace steklov
