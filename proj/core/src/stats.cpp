#include "debatekit/stats.hpp"

#include "debatekit/util.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace debatekit {

std::string tail_name(Tail t) {
    switch (t) {
        case Tail::one_greater: return "one_greater";
        case Tail::one_less: return "one_less";
        case Tail::two: return "two";
    }
    return "two";
}

namespace {

// Continued fraction for the incomplete beta (modified Lentz).
double betacf(double a, double b, double x) {
    constexpr int kMaxIter = 500;
    constexpr double kEps = 3e-16;
    constexpr double kFpMin = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    return h;
}

}  // namespace

double reg_inc_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) {
        throw Error("invalid-argument", "reg_inc_beta requires a, b > 0");
    }
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;

    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * betacf(a, b, x) / a;
    }
    return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

double student_t_cdf(double t, double dof) {
    if (!(dof > 0.0)) throw Error("invalid-argument", "dof must be positive");
    if (t == 0.0) return 0.5;
    const double x = dof / (dof + t * t);
    const double half_tail = 0.5 * reg_inc_beta(dof / 2.0, 0.5, x);
    return t > 0.0 ? 1.0 - half_tail : half_tail;
}

namespace {

struct Moments {
    double mean;
    double var;  // unbiased
    std::size_t n;
};

Moments moments(std::span<const double> xs) {
    const std::size_t n = xs.size();
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return {mean, ss / static_cast<double>(n - 1), n};
}

double p_from_t(double t, double dof, Tail tail) {
    const double cdf = student_t_cdf(t, dof);
    switch (tail) {
        case Tail::one_greater: return 1.0 - cdf;
        case Tail::one_less: return cdf;
        case Tail::two: return 2.0 * std::min(cdf, 1.0 - cdf);
    }
    return 1.0;
}

}  // namespace

TTestResult welch_t(std::span<const double> a, std::span<const double> b, Tail tail) {
    if (a.size() < 2 || b.size() < 2) {
        throw Error("insufficient-sample", "both samples need at least two points");
    }
    const Moments ma = moments(a);
    const Moments mb = moments(b);
    if (ma.var == 0.0 && mb.var == 0.0) {
        throw Error("zero-variance-both", "both samples are constant");
    }
    const double va_n = ma.var / static_cast<double>(ma.n);
    const double vb_n = mb.var / static_cast<double>(mb.n);
    const double t = (ma.mean - mb.mean) / std::sqrt(va_n + vb_n);
    const double dof = (va_n + vb_n) * (va_n + vb_n) /
                       (va_n * va_n / static_cast<double>(ma.n - 1) +
                        vb_n * vb_n / static_cast<double>(mb.n - 1));
    return {t, dof, p_from_t(t, dof, tail), tail};
}

TTestResult category_vs_rest(const std::map<std::string, double>& per_video_values,
                             const std::map<std::string, std::string>& category_of,
                             const std::string& category_m, Tail tail) {
    std::vector<double> in_m;
    std::vector<double> rest;
    for (const auto& [video, value] : per_video_values) {
        auto it = category_of.find(video);
        if (it != category_of.end() && it->second == category_m) {
            in_m.push_back(value);
        } else {
            rest.push_back(value);
        }
    }
    return welch_t(in_m, rest, tail);
}

double fleiss_kappa(const std::vector<std::vector<int>>& ratings) {
    if (ratings.empty() || ratings.front().empty()) {
        throw Error("invalid-argument", "ratings matrix is empty");
    }
    const std::size_t n_items = ratings.size();
    const std::size_t n_cats = ratings.front().size();

    long n_raters = 0;
    for (int c : ratings.front()) n_raters += c;
    if (n_raters < 2) {
        throw Error("unequal-rater-counts", "need at least two raters per item");
    }

    std::vector<double> p_j(n_cats, 0.0);
    double p_bar = 0.0;
    for (const auto& row : ratings) {
        if (row.size() != n_cats) {
            throw Error("invalid-argument", "ragged ratings matrix");
        }
        long row_sum = 0;
        long sq = 0;
        for (std::size_t j = 0; j < n_cats; ++j) {
            if (row[j] < 0) throw Error("invalid-argument", "negative rater count");
            row_sum += row[j];
            sq += static_cast<long>(row[j]) * row[j];
            p_j[j] += row[j];
        }
        if (row_sum != n_raters) {
            throw Error("unequal-rater-counts", "every item must have the same rater count");
        }
        p_bar += static_cast<double>(sq - n_raters) /
                 static_cast<double>(n_raters * (n_raters - 1));
    }
    p_bar /= static_cast<double>(n_items);

    double p_e = 0.0;
    for (std::size_t j = 0; j < n_cats; ++j) {
        const double pj = p_j[j] / static_cast<double>(n_items * static_cast<std::size_t>(n_raters));
        p_e += pj * pj;
    }
    if (p_e >= 1.0) {
        throw Error("degenerate", "chance agreement is 1; kappa undefined");
    }
    if (p_bar == 1.0) return 1.0;
    return (p_bar - p_e) / (1.0 - p_e);
}

}  // namespace debatekit
