#include "scalereg/rates.hpp"
#include "scalereg/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace scalereg {

namespace {

constexpr double kBracketLo = 1e-16;
constexpr double kBracketHi = 1e16;
constexpr int kBisectCap = 200;

// Fritsch-Carlson monotone slopes for a strictly increasing table.
std::vector<double> monotone_slopes(const std::vector<double>& ts,
                                    const std::vector<double>& ys) {
    const int n = static_cast<int>(ts.size());
    std::vector<double> d(n - 1), m(n);
    for (int k = 0; k + 1 < n; ++k)
        d[k] = (ys[k + 1] - ys[k]) / (ts[k + 1] - ts[k]);
    m[0] = d[0];
    m[n - 1] = d[n - 2];
    for (int k = 1; k + 1 < n; ++k) {
        if (d[k - 1] * d[k] <= 0.0) {
            m[k] = 0.0;
        } else {
            const double h0 = ts[k] - ts[k - 1];
            const double h1 = ts[k + 1] - ts[k];
            const double w1 = 2.0 * h1 + h0;
            const double w2 = h1 + 2.0 * h0;
            m[k] = (w1 + w2) / (w1 / d[k - 1] + w2 / d[k]);
        }
    }
    return m;
}

} // namespace

IndexFunction IndexFunction::hoelder(double gamma) {
    if (!(gamma > 0.0) || gamma > 1.0)
        throw InvalidParameterError("IndexFunction::hoelder: gamma must be in (0, 1]");
    IndexFunction f;
    f.kind_ = Kind::Hoelder;
    f.gamma_ = gamma;
    return f;
}

IndexFunction IndexFunction::logarithmic(double mu) {
    if (!(mu > 0.0))
        throw InvalidParameterError("IndexFunction::logarithmic: mu must be positive");
    IndexFunction f;
    f.kind_ = Kind::Logarithmic;
    f.mu_ = mu;
    return f;
}

IndexFunction IndexFunction::from_table(std::vector<double> ts, std::vector<double> values) {
    if (ts.size() != values.size() || ts.size() < 3)
        throw InvalidParameterError("IndexFunction::from_table: need >= 3 matching samples");
    if (ts.front() != 0.0 || values.front() != 0.0)
        throw InvalidParameterError("IndexFunction::from_table: table must start at (0, 0)");
    for (std::size_t k = 1; k < ts.size(); ++k)
        if (!(ts[k] > ts[k - 1]) || !(values[k] > values[k - 1]))
            throw InvalidParameterError("IndexFunction::from_table: table must be strictly "
                                        "increasing in both coordinates");
    IndexFunction f;
    f.kind_ = Kind::Table;
    f.slopes_ = monotone_slopes(ts, values);
    f.ts_ = std::move(ts);
    f.vals_ = std::move(values);
    f.validate(f.ts_.back());
    return f;
}

int IndexFunction::table_interval(double t) const {
    const int n = static_cast<int>(ts_.size());
    int lo = 0, hi = n - 1;
    while (hi - lo > 1) {
        const int mid = (lo + hi) / 2;
        (ts_[mid] <= t ? lo : hi) = mid;
    }
    return lo;
}

double IndexFunction::value(double t) const {
    if (t < 0.0)
        throw InvalidParameterError("IndexFunction: argument must be nonnegative");
    if (t == 0.0)
        return 0.0;
    switch (kind_) {
    case Kind::Hoelder:
        return std::pow(t, gamma_);
    case Kind::Logarithmic:
        return std::pow(std::log(3.0 + 1.0 / t), -mu_);
    case Kind::Table: {
        if (t >= ts_.back()) // linear extension with the end slope
            return vals_.back() + slopes_.back() * (t - ts_.back());
        const int k = table_interval(t);
        const double h = ts_[k + 1] - ts_[k];
        const double x = (t - ts_[k]) / h;
        const double h00 = (1.0 + 2.0 * x) * (1.0 - x) * (1.0 - x);
        const double h10 = x * (1.0 - x) * (1.0 - x);
        const double h01 = x * x * (3.0 - 2.0 * x);
        const double h11 = x * x * (x - 1.0);
        return h00 * vals_[k] + h10 * h * slopes_[k] + h01 * vals_[k + 1] +
               h11 * h * slopes_[k + 1];
    }
    }
    throw std::logic_error("unreachable");
}

double IndexFunction::derivative(double t) const {
    if (t < 0.0)
        throw InvalidParameterError("IndexFunction: argument must be nonnegative");
    switch (kind_) {
    case Kind::Hoelder:
        if (t == 0.0)
            return gamma_ == 1.0 ? 1.0 : std::numeric_limits<double>::infinity();
        return gamma_ * std::pow(t, gamma_ - 1.0);
    case Kind::Logarithmic:
        if (t == 0.0)
            return std::numeric_limits<double>::infinity();
        return mu_ * std::pow(std::log(3.0 + 1.0 / t), -mu_ - 1.0) / (3.0 * t * t + t);
    case Kind::Table: {
        if (t >= ts_.back())
            return slopes_.back();
        const int k = table_interval(t);
        const double h = ts_[k + 1] - ts_[k];
        const double x = (t - ts_[k]) / h;
        const double dh00 = 6.0 * x * (x - 1.0);
        const double dh10 = (1.0 - x) * (1.0 - 3.0 * x);
        const double dh01 = -dh00;
        const double dh11 = x * (3.0 * x - 2.0);
        return (dh00 * vals_[k] + dh01 * vals_[k + 1]) / h + dh10 * slopes_[k] +
               dh11 * slopes_[k + 1];
    }
    }
    throw std::logic_error("unreachable");
}

void IndexFunction::validate(double t_max, int samples) const {
    if (value(0.0) != 0.0)
        throw InvalidParameterError("IndexFunction: phi(0) must be 0");
    double prev = 0.0;
    std::vector<double> grid(samples);
    for (int i = 0; i < samples; ++i) {
        grid[i] = t_max * (i + 1.0) / samples;
        const double v = value(grid[i]);
        if (!(v > prev))
            throw InvalidParameterError("IndexFunction: not strictly increasing");
        prev = v;
    }
    for (int i = 0; i + 2 < samples; i += 2) {
        const double x = grid[i], y = grid[i + 2];
        if (value(0.5 * (x + y)) < 0.5 * (value(x) + value(y)) - 1e-12)
            throw InvalidParameterError("IndexFunction: concavity midpoint test failed");
    }
}

RateFunction::RateFunction(IndexFunction phi, double u, double s, double a)
    : phi_(std::move(phi)), u_(u), s_(s), a_(a) {
    if (!(a >= 0.0) || !(s >= 0.0) || !(s < u) || !(u <= 2.0 * s + a) || !(-a < s))
        throw InvalidIndicesError("RateFunction: indices must satisfy a >= 0, "
                                  "0 <= s < u <= 2s + a, -a < s");
    exponent_ = 2.0 * (u - s) / (a + u);
    if (!(exponent_ > 0.0) || exponent_ > 2.0)
        throw InvalidIndicesError("RateFunction: exponent 2(u-s)/(a+u) out of (0, 2]");
}

double RateFunction::psi(double t) const {
    if (t < 0.0)
        throw InvalidParameterError("RateFunction::psi: argument must be nonnegative");
    if (t == 0.0)
        return 0.0;
    return std::pow(phi_.value(std::sqrt(t)), exponent_);
}

double RateFunction::psi_prime(double t) const {
    if (!(t > 0.0))
        throw InvalidParameterError("RateFunction::psi_prime: argument must be positive");
    const double r = std::sqrt(t);
    const double pv = phi_.value(r);
    const double pd = phi_.derivative(r);
    return exponent_ * std::pow(pv, exponent_ - 1.0) * pd / (2.0 * r);
}

FenchelResult RateFunction::fenchel_app_full(double alpha) const {
    if (!(alpha > 0.0))
        throw InvalidParameterError("fenchel_app: alpha must be positive");
    const double target = 1.0 / alpha;
    auto value_at = [&](double tau) { return psi(tau) - tau / alpha; };

    double lo = kBracketLo, hi = kBracketHi;
    int budget = kBisectCap;

    // expand until the stationary point psi'(tau) = 1/alpha is bracketed
    while (psi_prime(lo) < target && budget-- > 0) {
        hi = lo;
        lo *= 1e-2;
        if (lo < 1e-280) {
            FenchelResult res; // supremum collapses to tau -> 0
            res.value = std::max(0.0, value_at(lo));
            res.maximizer = 0.0;
            return res;
        }
    }
    while (psi_prime(hi) > target && budget-- > 0) {
        lo = hi;
        hi *= 1e2;
        if (hi > 1e280)
            break;
    }

    // concavity screen: psi' must be nonincreasing across the bracket
    bool monotone = true;
    double prev = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 8; ++i) {
        const double tau = lo * std::pow(hi / lo, i / 8.0);
        const double d = psi_prime(tau);
        if (d > prev * (1.0 + 1e-9)) {
            monotone = false;
            break;
        }
        prev = d;
    }

    FenchelResult res;
    if (monotone) {
        for (int it = 0; it < kBisectCap && (hi - lo) > 1e-10 * lo; ++it) {
            const double mid = std::sqrt(lo * hi);
            (psi_prime(mid) > target ? lo : hi) = mid;
        }
        res.maximizer = std::sqrt(lo * hi);
    } else {
        // golden section over [0, tau_max], expanding until the tail decreases
        double tau_max = hi;
        while (value_at(tau_max * 1.618) > value_at(tau_max) && tau_max < 1e280)
            tau_max *= 1.618;
        double a = 0.0, b = tau_max;
        const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
        double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
        double fc = value_at(c), fd = value_at(d);
        for (int it = 0; it < kBisectCap && (b - a) > 1e-10 * (1.0 + b); ++it) {
            if (fc > fd) {
                b = d;
                d = c;
                fd = fc;
                c = b - inv_phi * (b - a);
                fc = value_at(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + inv_phi * (b - a);
                fd = value_at(d);
            }
        }
        res.maximizer = 0.5 * (a + b);
        res.used_fallback = true;
    }
    res.value = std::max(0.0, value_at(res.maximizer));
    return res;
}

double RateFunction::apriori_alpha_det(double delta) const {
    if (!(delta > 0.0))
        throw InvalidParameterError("apriori_alpha_det: delta must be positive");
    const double d = psi_prime(delta * delta);
    if (!std::isfinite(d) || d <= 0.0)
        throw DegenerateChoiceError("apriori_alpha_det: psi'(delta^2) is zero or not finite");
    return 1.0 / d;
}

double RateFunction::sigma_fn(double alpha) const {
    return std::sqrt(alpha * fenchel_app(alpha));
}

double RateFunction::sigma_tilde_fn(double alpha, double theta) const {
    return std::pow(alpha, 1.0 - 0.5 * theta) * std::sqrt(fenchel_app(alpha));
}

namespace {

// Invert a strictly increasing positive map by bisection on a log grid.
template <typename Fn>
double monotone_inverse(const Fn& fn, double target) {
    double lo = kBracketLo, hi = kBracketHi;
    int budget = kBisectCap;
    while (fn(lo) > target && budget-- > 0)
        lo *= 1e-2;
    while (fn(hi) < target && budget-- > 0)
        hi *= 1e2;
    for (int it = 0; it < kBisectCap && (hi - lo) > 1e-10 * lo; ++it) {
        const double mid = std::sqrt(lo * hi);
        (fn(mid) < target ? lo : hi) = mid;
    }
    return std::sqrt(lo * hi);
}

} // namespace

double RateFunction::apriori_alpha_stoch(double delta, double sigma, double theta) const {
    if (delta < 0.0 || sigma < 0.0 || (delta == 0.0 && sigma == 0.0))
        throw InvalidParameterError("apriori_alpha_stoch: need delta, sigma >= 0, not both 0");
    if (!(theta > 0.0) || !(theta < 1.0))
        throw InvalidParameterError("apriori_alpha_stoch: theta must be in (0, 1)");
    double alpha = 0.0;
    if (delta > 0.0)
        alpha += monotone_inverse([this](double x) { return sigma_fn(x); }, delta);
    if (sigma > 0.0)
        alpha += monotone_inverse([this, theta](double x) { return sigma_tilde_fn(x, theta); },
                                  sigma);
    return alpha;
}

double RateFunction::error_bound_det(double delta, double alpha, double c) const {
    if (delta < 0.0 || !(alpha > 0.0) || !(c > 0.0))
        throw InvalidParameterError("error_bound_det: need delta >= 0 and alpha, C > 0");
    return delta * delta / alpha + c * fenchel_app(8.0 * c * alpha);
}

std::vector<double> lepskij_alpha_grid(double delta, double r) {
    if (!(delta > 0.0) || !(r > 1.0))
        throw InvalidParameterError("lepskij_alpha_grid: need delta > 0 and r > 1");
    std::vector<double> alphas{delta * delta};
    while (alphas.back() < 1.0)
        alphas.push_back(alphas.front() * std::pow(r, 2.0 * alphas.size()));
    return alphas;
}

int lepskij_select_distances(const Mat& distances, double r) {
    const int m = static_cast<int>(distances.rows());
    int selected = 0;
    for (int j = 1; j < m; ++j) {
        bool ok = true;
        for (int i = 0; i <= j && ok; ++i)
            ok = distances(i, j) <= 4.0 * std::pow(r, -static_cast<double>(i));
        if (ok)
            selected = j;
    }
    return selected;
}

int lepskij_select(const std::vector<double>& alphas, const std::vector<Vec>& solutions,
                   double delta, double r, const SpectralScale& scale, double s) {
    const int m = static_cast<int>(alphas.size());
    if (m == 0 || solutions.size() != alphas.size())
        throw InvalidGridError("lepskij_select: empty grid or size mismatch");
    if (!(r > 1.0))
        throw InvalidGridError("lepskij_select: r must exceed 1");
    const double a1 = delta * delta;
    for (int j = 0; j < m; ++j) {
        const double expected = a1 * std::pow(r, 2.0 * j);
        if (std::abs(alphas[j] - expected) > 1e-9 * expected)
            throw InvalidGridError("lepskij_select: grid must be alpha_1 = delta^2, "
                                   "alpha_j = delta^2 r^{2j-2}");
    }
    if (alphas.back() < 1.0)
        throw InvalidGridError("lepskij_select: grid must stop at the first alpha >= 1");
    if (m > 1 && alphas[m - 2] >= 1.0)
        throw InvalidGridError("lepskij_select: grid extends beyond the first alpha >= 1");

    Mat distances(m, m);
    for (int i = 0; i < m; ++i) {
        distances(i, i) = 0.0;
        for (int j = i + 1; j < m; ++j) {
            const double d = scale.norm(s, solutions[i] - solutions[j]);
            distances(i, j) = d;
            distances(j, i) = d;
        }
    }
    return lepskij_select_distances(distances, r);
}

} // namespace scalereg
