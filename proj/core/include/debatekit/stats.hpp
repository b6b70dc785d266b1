#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

namespace debatekit {

enum class Tail { one_greater, one_less, two };

std::string tail_name(Tail t);

struct TTestResult {
    double t_stat = 0.0;
    double dof = 0.0;  // Welch-Satterthwaite, real-valued
    double p_value = 1.0;
    Tail tail = Tail::two;
};

/// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
/// Absolute error below 1e-10 over the usual statistical ranges.
double reg_inc_beta(double a, double b, double x);

/// CDF of Student's t with (real) dof degrees of freedom.
double student_t_cdf(double t, double dof);

/// Welch's unequal-variance t-test. Throws Error("insufficient-sample") when
/// either sample has fewer than two points and Error("zero-variance-both")
/// when both samples are constant.
TTestResult welch_t(std::span<const double> a, std::span<const double> b, Tail tail);

/// Mean of category M against the mean of everything else.
TTestResult category_vs_rest(const std::map<std::string, double>& per_video_values,
                             const std::map<std::string, std::string>& category_of,
                             const std::string& category_m, Tail tail);

/// Fleiss kappa over an items x categories matrix of rater counts. Every row
/// must sum to the same rater count n >= 2. Returns exactly 1.0 on perfect
/// agreement; throws Error("degenerate") when chance agreement is 1.
double fleiss_kappa(const std::vector<std::vector<int>>& ratings);

}  // namespace debatekit
