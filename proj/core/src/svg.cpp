#include "blindhd/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "blindhd/errors.hpp"

namespace blindhd::svg {

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

} // namespace

void LinePlot::add_series(Eigen::VectorXd x, Eigen::VectorXd y,
                          std::string color, double stroke_width) {
    if (x.size() != y.size())
        throw Error("LinePlot: series coordinate lengths differ");
    series_.push_back({std::move(x), std::move(y), std::move(color),
                       stroke_width});
}

void LinePlot::add_band(Eigen::VectorXd x, Eigen::VectorXd lo,
                        Eigen::VectorXd hi, std::string fill, double opacity) {
    if (x.size() != lo.size() || x.size() != hi.size())
        throw Error("LinePlot: band coordinate lengths differ");
    bands_.push_back({std::move(x), std::move(lo), std::move(hi),
                      std::move(fill), opacity});
}

std::string LinePlot::render() const {
    double xmin = std::numeric_limits<double>::max();
    double xmax = std::numeric_limits<double>::lowest();
    double ymin = xmin, ymax = xmax;
    auto expand = [&](const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
        if (x.size() == 0) return;
        xmin = std::min(xmin, x.minCoeff());
        xmax = std::max(xmax, x.maxCoeff());
        ymin = std::min(ymin, y.minCoeff());
        ymax = std::max(ymax, y.maxCoeff());
    };
    for (const auto& b : bands_) {
        expand(b.x, b.lo);
        expand(b.x, b.hi);
    }
    for (const auto& s : series_) expand(s.x, s.y);
    if (!(xmax > xmin)) { xmin -= 0.5; xmax += 0.5; }
    if (!(ymax > ymin)) { ymin -= 0.5; ymax += 0.5; }
    const double ypad = 0.05 * (ymax - ymin);
    ymin -= ypad;
    ymax += ypad;

    const double ml = 56, mr = 14, mt = title_.empty() ? 14 : 30, mb = 34;
    const double pw = width_ - ml - mr, ph = height_ - mt - mb;
    auto px = [&](double x) { return ml + pw * (x - xmin) / (xmax - xmin); };
    auto py = [&](double y) { return mt + ph * (ymax - y) / (ymax - ymin); };

    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
           std::to_string(width_) + "\" height=\"" + std::to_string(height_) +
           "\" viewBox=\"0 0 " + std::to_string(width_) + " " +
           std::to_string(height_) + "\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!title_.empty())
        out += "<text x=\"" + num(ml) + "\" y=\"20\" font-family=\"sans-serif\""
               " font-size=\"13\">" + title_ + "</text>\n";

    for (const auto& b : bands_) {
        std::string pts;
        for (Eigen::Index i = 0; i < b.x.size(); ++i)
            pts += num(px(b.x(i))) + "," + num(py(b.hi(i))) + " ";
        for (Eigen::Index i = b.x.size() - 1; i >= 0; --i)
            pts += num(px(b.x(i))) + "," + num(py(b.lo(i))) + " ";
        out += "<polygon points=\"" + pts + "\" fill=\"" + b.fill +
               "\" fill-opacity=\"" + num(b.opacity) + "\" stroke=\"none\"/>\n";
    }
    for (const auto& s : series_) {
        std::string pts;
        for (Eigen::Index i = 0; i < s.x.size(); ++i)
            pts += num(px(s.x(i))) + "," + num(py(s.y(i))) + " ";
        out += "<polyline points=\"" + pts + "\" fill=\"none\" stroke=\"" +
               s.color + "\" stroke-width=\"" + num(s.stroke_width) + "\"/>\n";
    }

    // frame and min/max tick labels
    out += "<rect x=\"" + num(ml) + "\" y=\"" + num(mt) + "\" width=\"" +
           num(pw) + "\" height=\"" + num(ph) +
           "\" fill=\"none\" stroke=\"#444444\"/>\n";
    out += "<text x=\"" + num(ml) + "\" y=\"" + num(height_ - 12) +
           "\" font-family=\"sans-serif\" font-size=\"11\">" + label(xmin) +
           "</text>\n";
    out += "<text x=\"" + num(ml + pw - 24) + "\" y=\"" + num(height_ - 12) +
           "\" font-family=\"sans-serif\" font-size=\"11\">" + label(xmax) +
           "</text>\n";
    out += "<text x=\"6\" y=\"" + num(mt + 10) +
           "\" font-family=\"sans-serif\" font-size=\"11\">" + label(ymax) +
           "</text>\n";
    out += "<text x=\"6\" y=\"" + num(mt + ph) +
           "\" font-family=\"sans-serif\" font-size=\"11\">" + label(ymin) +
           "</text>\n";
    out += "</svg>\n";
    return out;
}

void LinePlot::write(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("LinePlot: cannot write " + path.string());
    out << render();
}

} // namespace blindhd::svg
