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

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "radperc/dp.hpp"

namespace radperc {

/// Reference directed-percolation exponents in 1+1 dimensions.
struct ExponentTable {
    double theta = 0.3136;
    double delta = 0.1595;
    double z = 1.581;
    double nu_par = 1.734;
    double nu_perp = 1.097;

    /// Vertical exponent (beta + beta') / nu_par of the OTOC profile; equals 2 delta.
    double collapse_exponent_otoc() const {
        return 2 * delta;
    }
    /// Growth exponent of R^2(t) at criticality.
    double spreading_exponent() const {
        return theta + 2 / z;
    }
};

struct MeanFieldResult {
    double rho_e = 0;
    double rho_v = 0;
    double P_r = 0;
    double P_l = 0;
    double P_d = 0;
    /// NaN when rho_v <= 0.
    double v_B = 0;
    double p_c_mf = 0;
    /// False past the mean-field threshold, where the steady densities are not positive.
    bool valid = true;
};

/// Uncorrelated steady-state estimate of the densities and of the rightmost-particle walk.
/// Requires 0 <= p < 1.
MeanFieldResult mean_field(LocalDim q, double p);

/// Closed rational form of P_r - P_l - 2 P_d / rho_v.
double v_B_rational(double q, double p);
/// First-order expansion of v_B in p.
double v_B_small_p(double q, double p);

struct Window {
    double lo = 0;
    double hi = 0;
};

/// [16, depth / 4].
Window default_window(size_t depth);

struct FitResult {
    double exponent = 0;
    double exponent_err = 0;
    double amplitude = 0;
    /// Residual sum of squares in log space.
    double goodness = 0;
    Window window;
    size_t points = 0;
    std::optional<double> p_c;
};

/// Least-squares line through (log t, log y) for t in the window. Throws if any y in the window
/// is not positive or fewer than two points fall inside it.
FitResult fit_power_law(std::span<const double> t, std::span<const double> y, Window w);

struct Curve {
    double p = 0;
    std::vector<double> t;
    std::vector<double> y;
};

struct CurvatureFit {
    double p = 0;
    /// Coefficient of (log t)^2 in a quadratic fit of log y.
    double curvature = 0;
    /// Slope of the straight-line fit over the same window.
    double slope = 0;
};

std::vector<CurvatureFit> log_curvatures(const std::vector<Curve> &family, Window w);

/// Critical point as the zero of a linear fit of log-log curvature against p; the exponent is
/// the log-log slope interpolated to that point. Needs three or more curves, and the curvature
/// must change sign across the grid.
FitResult estimate_pc(const std::vector<Curve> &family, Window w);

struct CollapsePoint {
    std::string observable;
    /// -1 below p_c, +1 above.
    int branch = 0;
    double p = 0;
    double t = 0;
    double x = 0;
    double y = 0;
};

/// Points (t |p - p_c|^{nu_par}, y |p - p_c|^{y_exponent nu_par}) for t in the window and y > 0.
std::vector<CollapsePoint> rescale_collapse(const std::string &observable, const std::vector<Curve> &family,
                                            double p_c, double y_exponent, double nu_par, Window w);
/// Same selection without rescaling (x = t), the baseline for collapse_metric.
std::vector<CollapsePoint> raw_points(const std::string &observable, const std::vector<Curve> &family, double p_c,
                                      Window w);

/// Mean over (observable, branch) groups of the inter-curve variance of log y, averaged over
/// log x bins holding two or more curves. Each curve enters a bin through its local
/// least-squares line in (log x, log y) evaluated at the bin centre, and only when its points in
/// that bin straddle the centre.
double collapse_metric(const std::vector<CollapsePoint> &points, size_t bins = 20);

struct OtocCollapsePoint {
    double t = 0;
    double x = 0;
    double y = 0;
};

/// (x t^{-1/z}, C t^{2 delta}) for each slice.
std::vector<OtocCollapsePoint> rescale_otoc(double t, std::span<const double> x, std::span<const double> c,
                                            const ExponentTable &e);

struct VelocityResult {
    double v_B = 0;
    double v_B_err = 0;
    double width_exponent = 0;
    double width_exponent_err = 0;
};

/// Slope of the mean front against t, and log-log slope of the front spread.
VelocityResult measure_velocity(std::span<const double> t, std::span<const double> front,
                                std::span<const double> front_std, Window w);

}  // namespace radperc
