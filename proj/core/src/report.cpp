#include "scalereg/report.hpp"
#include "scalereg/errors.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

namespace scalereg {

SlopeFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    SlopeFit fit;
    fit.slope = fit.intercept = fit.stderr_slope = std::numeric_limits<double>::quiet_NaN();
    fit.points = static_cast<int>(x.size());
    if (x.size() != y.size() || x.size() < 2)
        return fit;
    const int n = fit.points;
    double mx = 0.0, my = 0.0;
    for (int i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (int i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0)
        return fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    if (n > 2) {
        double ss_res = 0.0;
        for (int i = 0; i < n; ++i) {
            const double r = y[i] - (fit.intercept + fit.slope * x[i]);
            ss_res += r * r;
        }
        fit.stderr_slope = std::sqrt(ss_res / (n - 2) / sxx);
    }
    return fit;
}

std::string RateReport::to_csv() const {
    std::string out = "delta,sigma,rep,alpha,err_s,err_neg_a,resid_Y,iters,converged,seed\n";
    char buf[512];
    for (const RateRow& r : rows) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%d,%.17g,%.17g,%.17g,%.17g,%d,%d,%" PRIu64 "\n",
                      r.delta, r.sigma, r.rep, r.alpha, r.err_s, r.err_neg_a, r.resid_y, r.iters,
                      r.converged ? 1 : 0, static_cast<std::uint64_t>(r.seed));
        out += buf;
    }
    return out;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw InvalidParameterError("cannot open output file '" + path + "'");
    out << content;
}

std::string rate_plot_svg(const RateReport& report, bool against_sigma) {
    const int width = 560, height = 420, margin = 60;
    std::string svg;
    char buf[512];
    auto add = [&](const char* fmt, auto... args) {
        std::snprintf(buf, sizeof(buf), fmt, args...);
        svg += buf;
    };

    std::vector<double> xs, ys;
    for (const RateRow& r : report.rows) {
        const double level = against_sigma ? r.sigma : r.delta;
        if (r.converged && level > 0.0 && r.err_s > 0.0) {
            xs.push_back(std::log10(level));
            ys.push_back(std::log10(r.err_s));
        }
    }

    add("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" height=\"%d\">\n", width, height);
    add("<rect width=\"%d\" height=\"%d\" fill=\"white\"/>\n", width, height);
    if (xs.empty()) {
        svg += "<text x=\"40\" y=\"40\">no converged points</text>\n</svg>\n";
        return svg;
    }

    double x0 = *std::min_element(xs.begin(), xs.end());
    double x1 = *std::max_element(xs.begin(), xs.end());
    double y0 = *std::min_element(ys.begin(), ys.end());
    double y1 = *std::max_element(ys.begin(), ys.end());
    if (x1 - x0 < 1e-12) {
        x0 -= 0.5;
        x1 += 0.5;
    }
    if (y1 - y0 < 1e-12) {
        y0 -= 0.5;
        y1 += 0.5;
    }
    const double padx = 0.06 * (x1 - x0), pady = 0.06 * (y1 - y0);
    x0 -= padx;
    x1 += padx;
    y0 -= pady;
    y1 += pady;
    auto px = [&](double x) { return margin + (x - x0) / (x1 - x0) * (width - 2 * margin); };
    auto py = [&](double y) { return height - margin - (y - y0) / (y1 - y0) * (height - 2 * margin); };

    add("<line x1=\"%d\" y1=\"%d\" x2=\"%d\" y2=\"%d\" stroke=\"black\"/>\n", margin,
        height - margin, width - margin, height - margin);
    add("<line x1=\"%d\" y1=\"%d\" x2=\"%d\" y2=\"%d\" stroke=\"black\"/>\n", margin, margin,
        margin, height - margin);
    add("<text x=\"%d\" y=\"%d\" font-size=\"12\">log10 %s</text>\n", width / 2 - 30, height - 20,
        against_sigma ? "sigma" : "delta");
    add("<text x=\"14\" y=\"%d\" font-size=\"12\" transform=\"rotate(-90 14 %d)\">log10 err_s"
        "</text>\n",
        height / 2 + 30, height / 2 + 30);

    for (std::size_t i = 0; i < xs.size(); ++i)
        add("<circle cx=\"%.1f\" cy=\"%.1f\" r=\"3.5\" fill=\"#1f77b4\"/>\n", px(xs[i]), py(ys[i]));

    const double xa = x0 + 0.02, xb = x1 - 0.02;
    if (report.fit.defined() && std::isfinite(report.fit.slope)) {
        add("<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"#d62728\" "
            "stroke-width=\"1.5\"/>\n",
            px(xa), py(report.fit.intercept + report.fit.slope * xa), px(xb),
            py(report.fit.intercept + report.fit.slope * xb));
        add("<text x=\"%d\" y=\"24\" font-size=\"12\" fill=\"#d62728\">fit slope %.3f</text>\n",
            margin, report.fit.slope);
    }
    if (std::isfinite(report.theoretical_exponent)) {
        // anchor the theoretical line at the first plotted point
        const double c = ys.front() - report.theoretical_exponent * xs.front();
        add("<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"#2ca02c\" "
            "stroke-dasharray=\"5,4\"/>\n",
            px(xa), py(c + report.theoretical_exponent * xa), px(xb),
            py(c + report.theoretical_exponent * xb));
        add("<text x=\"%d\" y=\"40\" font-size=\"12\" fill=\"#2ca02c\">theory slope %.3f</text>\n",
            margin, report.theoretical_exponent);
    }
    svg += "</svg>\n";
    return svg;
}

} // namespace scalereg
