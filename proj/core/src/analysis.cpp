// Copyright 2026 The radperc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "radperc/analysis.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace radperc {

MeanFieldResult mean_field(LocalDim q, double p) {
    if (!(p >= 0.0 && p < 1.0)) {
        throw std::invalid_argument("mean_field: p must lie in [0, 1)");
    }
    // x = 1/q^2, which is 0 in the q -> infinity limit.
    double x = 0;
    if (!q.is_infinite()) {
        double qd = q.value();
        x = 1.0 / (qd * qd);
    }
    MeanFieldResult r;
    double keep = 1.0 - p;
    r.rho_e = (1.0 - x - 2.0 * p) / keep;
    r.rho_v = (1.0 + x) * (1.0 - x - 2.0 * p) / (keep * keep);
    r.p_c_mf = (1.0 - x) / 2.0;
    r.P_r = keep / (1.0 + x);
    r.P_l = (keep * x + p * keep * (1.0 - x)) / (1.0 + x);
    r.P_d = (p * p * (1.0 - x) + 2.0 * p * x) / (1.0 + x);
    r.valid = r.rho_v > 0;
    r.v_B = r.valid ? r.P_r - r.P_l - 2.0 * r.P_d / r.rho_v : std::numeric_limits<double>::quiet_NaN();
    return r;
}

double v_B_rational(double q, double p) {
    double q2 = q * q;
    double q4 = q2 * q2;
    double q6 = q4 * q2;
    double num = (1 - p) * (1 - p) *
                 ((2 * p * (p + 1) - 1) * q6 + (1 - 2 * (p - 2) * p) * q4 + (1 - 2 * p) * q2 - 1);
    double den = (q2 + 1) * (q2 + 1) * ((2 * p - 1) * q2 + 1);
    return num / den;
}

double v_B_small_p(double q, double p) {
    double q2 = q * q;
    double q4 = q2 * q2;
    double q6 = q4 * q2;
    return (q2 - 1) / (q2 + 1) - 2 * p * (q6 + q4 - q2 + 1) / ((q2 - 1) * (q2 + 1) * (q2 + 1));
}

Window default_window(size_t depth) {
    return {16.0, static_cast<double>(depth) / 4.0};
}

namespace {

struct LineFit {
    double slope;
    double intercept;
    double slope_err;
    double rss;
    size_t n;
};

LineFit fit_line(const std::vector<double> &x, const std::vector<double> &y) {
    size_t n = x.size();
    if (n < 2) {
        throw std::invalid_argument("line fit needs at least two points");
    }
    double mx = 0;
    double my = 0;
    for (size_t i = 0; i < n; i++) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0;
    double sxy = 0;
    for (size_t i = 0; i < n; i++) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx <= 0) {
        throw std::invalid_argument("line fit needs at least two distinct abscissae");
    }
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.rss = 0;
    for (size_t i = 0; i < n; i++) {
        double r = y[i] - (f.intercept + f.slope * x[i]);
        f.rss += r * r;
    }
    f.n = n;
    f.slope_err = n > 2 ? std::sqrt(f.rss / static_cast<double>(n - 2) / sxx) : 0.0;
    return f;
}

void select_log(std::span<const double> t, std::span<const double> y, Window w, std::vector<double> &lx,
                std::vector<double> &ly) {
    if (t.size() != y.size()) {
        throw std::invalid_argument("curve abscissa and ordinate differ in length");
    }
    for (size_t i = 0; i < t.size(); i++) {
        if (t[i] < w.lo || t[i] > w.hi) {
            continue;
        }
        if (!(y[i] > 0) || !(t[i] > 0)) {
            throw std::invalid_argument("power-law fit: nonpositive value at t=" + std::to_string(t[i]));
        }
        lx.push_back(std::log(t[i]));
        ly.push_back(std::log(y[i]));
    }
}

}  // namespace

FitResult fit_power_law(std::span<const double> t, std::span<const double> y, Window w) {
    std::vector<double> lx;
    std::vector<double> ly;
    select_log(t, y, w, lx, ly);
    if (lx.size() < 2) {
        throw std::invalid_argument("power-law fit: fewer than two points in window");
    }
    LineFit f = fit_line(lx, ly);
    FitResult r;
    r.exponent = f.slope;
    r.exponent_err = f.slope_err;
    r.amplitude = std::exp(f.intercept);
    r.goodness = f.rss;
    r.window = w;
    r.points = f.n;
    return r;
}

std::vector<CurvatureFit> log_curvatures(const std::vector<Curve> &family, Window w) {
    std::vector<CurvatureFit> out;
    for (const Curve &c : family) {
        std::vector<double> lx;
        std::vector<double> ly;
        select_log(c.t, c.y, w, lx, ly);
        if (lx.size() < 4) {
            throw std::invalid_argument("curvature fit: fewer than four points in window");
        }
        Eigen::MatrixXd a(lx.size(), 3);
        Eigen::VectorXd b(lx.size());
        for (size_t i = 0; i < lx.size(); i++) {
            a(static_cast<Eigen::Index>(i), 0) = 1.0;
            a(static_cast<Eigen::Index>(i), 1) = lx[i];
            a(static_cast<Eigen::Index>(i), 2) = lx[i] * lx[i];
            b(static_cast<Eigen::Index>(i)) = ly[i];
        }
        Eigen::Vector3d coef = a.colPivHouseholderQr().solve(b);
        out.push_back({c.p, coef(2), fit_line(lx, ly).slope});
    }
    return out;
}

FitResult estimate_pc(const std::vector<Curve> &family, Window w) {
    if (family.size() < 3) {
        throw std::invalid_argument("estimate_pc: need at least three curves");
    }
    std::vector<CurvatureFit> fits = log_curvatures(family, w);
    bool has_pos = false;
    bool has_neg = false;
    std::vector<double> ps;
    std::vector<double> curv;
    std::vector<double> slopes;
    for (const auto &f : fits) {
        has_pos |= f.curvature > 0;
        has_neg |= f.curvature < 0;
        ps.push_back(f.p);
        curv.push_back(f.curvature);
        slopes.push_back(f.slope);
    }
    if (!(has_pos && has_neg)) {
        throw std::runtime_error("estimate_pc: log-log curvature does not change sign across the p grid");
    }
    LineFit c = fit_line(ps, curv);
    if (c.slope == 0) {
        throw std::runtime_error("estimate_pc: curvature independent of p");
    }
    double pc = -c.intercept / c.slope;
    LineFit s = fit_line(ps, slopes);
    FitResult r;
    r.p_c = pc;
    r.exponent = s.intercept + s.slope * pc;
    r.exponent_err = s.slope_err;
    r.goodness = c.rss;
    r.window = w;
    r.points = fits.size();
    // Amplitude from the curve nearest to the estimate.
    size_t nearest = 0;
    for (size_t i = 1; i < ps.size(); i++) {
        if (std::abs(ps[i] - pc) < std::abs(ps[nearest] - pc)) {
            nearest = i;
        }
    }
    r.amplitude = fit_power_law(family[nearest].t, family[nearest].y, w).amplitude;
    return r;
}

namespace {

std::vector<CollapsePoint> collapse_points(const std::string &observable, const std::vector<Curve> &family,
                                           double p_c, bool rescale, double y_exponent, double nu_par, Window w) {
    std::vector<CollapsePoint> out;
    for (const Curve &c : family) {
        double dist = std::abs(c.p - p_c);
        if (dist == 0) {
            throw std::invalid_argument("collapse: curve sits at p_c and belongs to neither branch");
        }
        int branch = c.p < p_c ? -1 : 1;
        double xs = rescale ? std::pow(dist, nu_par) : 1.0;
        double ys = rescale ? std::pow(dist, y_exponent * nu_par) : 1.0;
        for (size_t i = 0; i < c.t.size(); i++) {
            if (c.t[i] < w.lo || c.t[i] > w.hi || !(c.y[i] > 0)) {
                continue;
            }
            out.push_back({observable, branch, c.p, c.t[i], c.t[i] * xs, c.y[i] * ys});
        }
    }
    return out;
}

}  // namespace

std::vector<CollapsePoint> rescale_collapse(const std::string &observable, const std::vector<Curve> &family,
                                            double p_c, double y_exponent, double nu_par, Window w) {
    return collapse_points(observable, family, p_c, true, y_exponent, nu_par, w);
}

std::vector<CollapsePoint> raw_points(const std::string &observable, const std::vector<Curve> &family, double p_c,
                                      Window w) {
    return collapse_points(observable, family, p_c, false, 0, 0, w);
}

double collapse_metric(const std::vector<CollapsePoint> &points, size_t bins) {
    if (bins == 0) {
        throw std::invalid_argument("collapse_metric: need at least one bin");
    }
    std::map<std::pair<std::string, int>, std::vector<const CollapsePoint *>> groups;
    for (const auto &pt : points) {
        if (pt.x > 0 && pt.y > 0) {
            groups[{pt.observable, pt.branch}].push_back(&pt);
        }
    }
    double total = 0;
    size_t counted = 0;
    for (const auto &[key, pts] : groups) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (const auto *pt : pts) {
            lo = std::min(lo, std::log(pt->x));
            hi = std::max(hi, std::log(pt->x));
        }
        double width = (hi - lo) / static_cast<double>(bins);
        // bin -> curve (p) -> points (log x, log y)
        std::map<size_t, std::map<double, std::vector<std::pair<double, double>>>> cells;
        for (const auto *pt : pts) {
            double lx = std::log(pt->x);
            size_t b = width > 0 ? std::min(bins - 1, static_cast<size_t>((lx - lo) / width)) : 0;
            cells[b][pt->p].emplace_back(lx, std::log(pt->y));
        }
        double group_sum = 0;
        size_t group_bins = 0;
        for (const auto &[b, curves] : cells) {
            double centre = lo + (static_cast<double>(b) + 0.5) * width;
            std::vector<double> means;
            for (const auto &[p, cell] : curves) {
                double x_min = cell.front().first;
                double x_max = x_min;
                for (const auto &[lx, ly] : cell) {
                    x_min = std::min(x_min, lx);
                    x_max = std::max(x_max, lx);
                }
                if (width == 0) {
                    double sum = 0;
                    for (const auto &point : cell) {
                        sum += point.second;
                    }
                    means.push_back(sum / static_cast<double>(cell.size()));
                    continue;
                }
                if (x_min > centre || x_max < centre || x_min == x_max) {
                    continue;
                }
                std::vector<double> xs;
                std::vector<double> ys;
                for (const auto &[lx, ly] : cell) {
                    xs.push_back(lx - centre);
                    ys.push_back(ly);
                }
                means.push_back(fit_line(xs, ys).intercept);
            }
            if (means.size() < 2) {
                continue;
            }
            double m = 0;
            for (double v : means) {
                m += v;
            }
            m /= static_cast<double>(means.size());
            double var = 0;
            for (double v : means) {
                var += (v - m) * (v - m);
            }
            group_sum += var / static_cast<double>(means.size());
            group_bins++;
        }
        if (group_bins > 0) {
            total += group_sum / static_cast<double>(group_bins);
            counted++;
        }
    }
    if (counted == 0) {
        throw std::invalid_argument("collapse_metric: no bin holds two or more curves");
    }
    return total / static_cast<double>(counted);
}

std::vector<OtocCollapsePoint> rescale_otoc(double t, std::span<const double> x, std::span<const double> c,
                                            const ExponentTable &e) {
    if (x.size() != c.size() || !(t > 0)) {
        throw std::invalid_argument("rescale_otoc: mismatched slice or nonpositive time");
    }
    std::vector<OtocCollapsePoint> out;
    double xs = std::pow(t, -1.0 / e.z);
    double ys = std::pow(t, e.collapse_exponent_otoc());
    for (size_t i = 0; i < x.size(); i++) {
        out.push_back({t, x[i] * xs, c[i] * ys});
    }
    return out;
}

VelocityResult measure_velocity(std::span<const double> t, std::span<const double> front,
                                std::span<const double> front_std, Window w) {
    if (t.size() != front.size() || t.size() != front_std.size()) {
        throw std::invalid_argument("measure_velocity: curves differ in length");
    }
    std::vector<double> tt;
    std::vector<double> ff;
    std::vector<double> lt;
    std::vector<double> ls;
    for (size_t i = 0; i < t.size(); i++) {
        if (t[i] < w.lo || t[i] > w.hi) {
            continue;
        }
        if (std::isnan(front[i]) || !(front_std[i] > 0)) {
            throw std::invalid_argument("measure_velocity: no surviving front at t=" + std::to_string(t[i]));
        }
        tt.push_back(t[i]);
        ff.push_back(front[i]);
        lt.push_back(std::log(t[i]));
        ls.push_back(std::log(front_std[i]));
    }
    LineFit v = fit_line(tt, ff);
    LineFit s = fit_line(lt, ls);
    return {v.slope, v.slope_err, s.slope, s.slope_err};
}

}  // namespace radperc
