#pragma once

#include <algorithm>
#include <array>
#include <limits>
#include <cmath>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "fairscope/audit/run.hpp"
#include "fairscope/ingest/csv.hpp"

namespace fairscope {

struct Series {
    std::string label;
    std::string color;
    std::vector<double> x;
    std::vector<double> y;
};

namespace svg_detail {

inline std::string escape(const std::string& s)
{
    std::string out;
    for (char ch : s) {
        switch (ch) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out.push_back(ch);
        }
    }
    return out;
}

inline std::string num(double v)
{
    return format_fixed(v, 2);
}

/// Tick label text: compact for small magnitudes.
inline std::string tick(double v)
{
    const double a = std::abs(v);
    if (a != 0.0 && a < 0.01) {
        return format_fixed(v, 5);
    }
    if (a < 10.0) {
        return format_fixed(v, 3);
    }
    return format_fixed(v, 1);
}

}  // namespace svg_detail

/// One line-chart panel at (left, top) of size (width, height).
inline void svg_panel(std::ostream& out, double left, double top, double width, double height,
                      const std::string& title, const std::string& x_label, const std::string& y_label,
                      const std::vector<Series>& series)
{
    using svg_detail::num;
    const double pad_l = 70;
    const double pad_r = 150;
    const double pad_t = 30;
    const double pad_b = 45;
    const double pw = width - pad_l - pad_r;
    const double ph = height - pad_t - pad_b;
    double x_lo = 0;
    double x_hi = 1;
    double y_lo = 0;
    double y_hi = 1;
    bool any = false;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.y[i])) {
                continue;
            }
            if (!any) {
                x_lo = x_hi = s.x[i];
                y_lo = y_hi = s.y[i];
                any = true;
            }
            x_lo = std::min(x_lo, s.x[i]);
            x_hi = std::max(x_hi, s.x[i]);
            y_lo = std::min(y_lo, s.y[i]);
            y_hi = std::max(y_hi, s.y[i]);
        }
    }
    if (x_hi <= x_lo) {
        x_hi = x_lo + 1;
    }
    if (y_hi <= y_lo) {
        const double bump = std::max(std::abs(y_lo) * 0.05, 1e-6);
        y_lo -= bump;
        y_hi += bump;
    }
    const double margin = (y_hi - y_lo) * 0.05;
    y_lo -= margin;
    y_hi += margin;
    auto sx = [&](double v) { return left + pad_l + (v - x_lo) / (x_hi - x_lo) * pw; };
    auto sy = [&](double v) { return top + pad_t + (1.0 - (v - y_lo) / (y_hi - y_lo)) * ph; };

    out << "  <g>\n";
    out << "    <text x=\"" << num(left + pad_l + pw / 2) << "\" y=\"" << num(top + 18)
        << "\" text-anchor=\"middle\" font-size=\"14\">" << svg_detail::escape(title) << "</text>\n";
    out << "    <rect x=\"" << num(left + pad_l) << "\" y=\"" << num(top + pad_t) << "\" width=\"" << num(pw)
        << "\" height=\"" << num(ph) << "\" fill=\"none\" stroke=\"#444\"/>\n";
    for (int t = 0; t <= 4; ++t) {
        const double v = y_lo + (y_hi - y_lo) * t / 4.0;
        out << "    <line x1=\"" << num(left + pad_l - 4) << "\" y1=\"" << num(sy(v)) << "\" x2=\"" << num(left + pad_l)
            << "\" y2=\"" << num(sy(v)) << "\" stroke=\"#444\"/>\n";
        out << "    <text x=\"" << num(left + pad_l - 6) << "\" y=\"" << num(sy(v) + 4)
            << "\" text-anchor=\"end\" font-size=\"10\">" << svg_detail::tick(v) << "</text>\n";
    }
    // The x axis counts folds, so ticks sit on whole numbers.
    const double x_step = std::max(1.0, std::ceil((x_hi - x_lo) / 10.0));
    for (double v = std::ceil(x_lo); v <= x_hi; v += x_step) {
        out << "    <text x=\"" << num(sx(v)) << "\" y=\"" << num(top + pad_t + ph + 14)
            << "\" text-anchor=\"middle\" font-size=\"10\">" << std::llround(v) << "</text>\n";
    }
    out << "    <text x=\"" << num(left + pad_l + pw / 2) << "\" y=\"" << num(top + height - 8)
        << "\" text-anchor=\"middle\" font-size=\"11\">" << svg_detail::escape(x_label) << "</text>\n";
    out << "    <text transform=\"translate(" << num(left + 16) << "," << num(top + pad_t + ph / 2)
        << ") rotate(-90)\" text-anchor=\"middle\" font-size=\"11\">" << svg_detail::escape(y_label) << "</text>\n";
    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        out << "    <polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (std::isfinite(s.y[i])) {
                out << num(sx(s.x[i])) << ',' << num(sy(s.y[i])) << ' ';
            }
        }
        out << "\"/>\n";
        const double ly = top + pad_t + 12 + 16 * static_cast<double>(k);
        const double lx = left + pad_l + pw + 10;
        out << "    <line x1=\"" << num(lx) << "\" y1=\"" << num(ly) << "\" x2=\"" << num(lx + 18) << "\" y2=\""
            << num(ly) << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"/>\n";
        out << "    <text x=\"" << num(lx + 22) << "\" y=\"" << num(ly + 4) << "\" font-size=\"10\">"
            << svg_detail::escape(s.label) << "</text>\n";
    }
    out << "  </g>\n";
}

/// Three stacked panels for one learner on one attribute: group 0 mean
/// prediction per fold before and after alternation, the same for group 1,
/// and the per-fold divergence of both groups. `timestamp` is embedded as a
/// comment when non-empty.
inline void write_fold_plot(std::ostream& out, const AttributeResult& attribute, const LearnerScore& score,
                            const std::string& timestamp)
{
    const double width = 720;
    const double panel = 260;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << svg_detail::num(width) << "\" height=\""
        << svg_detail::num(panel * 3) << "\" font-family=\"sans-serif\">\n";
    if (!timestamp.empty()) {
        out << "  <!-- generated " << svg_detail::escape(timestamp) << " -->\n";
    }
    out << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    const auto& g0 = attribute.spec.group_names.at(0);
    const auto& g1 = attribute.spec.group_names.at(1);
    std::vector<double> xs;
    std::array<std::vector<double>, 2> pred;
    std::array<std::vector<double>, 2> alt;
    std::array<std::vector<double>, 2> kl;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (const auto& f : score.folds) {
        xs.push_back(static_cast<double>(f.fold_index + 1));
        for (std::size_t g = 0; g < 2; ++g) {
            pred[g].push_back(f.skipped ? nan : f.p[g].mu);
            alt[g].push_back(f.skipped ? nan : f.q[g].mu);
            kl[g].push_back(f.skipped ? nan : f.kl[g]);
        }
    }
    const std::string who = score.learner + ", " + attribute.spec.attribute;
    svg_panel(out, 0, 0, width, panel, "(a) " + g0 + ": mean prediction per fold (" + who + ")", "fold",
              "mean prediction",
              {{g0, "#1f77b4", xs, pred[0]}, {g0 + " as " + g1, "#d62728", xs, alt[0]}});
    svg_panel(out, 0, panel, width, panel, "(b) " + g1 + ": mean prediction per fold (" + who + ")", "fold",
              "mean prediction",
              {{g1, "#1f77b4", xs, pred[1]}, {g1 + " as " + g0, "#d62728", xs, alt[1]}});
    svg_panel(out, 0, 2 * panel, width, panel, "(c) KL divergence per fold (" + who + ")", "fold", "KL divergence",
              {{g0, "#2ca02c", xs, kl[0]}, {g1, "#9467bd", xs, kl[1]}});
    out << "</svg>\n";
}

}  // namespace fairscope
