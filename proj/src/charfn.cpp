#include "dclt/charfn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "dclt/discounted.hpp"

namespace dclt {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

class AnalyticNode final : public detail::CfNode
{
  public:
    explicit AnalyticNode(Distribution dist) : dist_(std::move(dist)) {}

    CfEval eval(double xi) const override { return dist_.cf_eval(xi); }
    CfKind kind() const override { return CfKind::analytic; }
    bool is_empirical() const override { return false; }
    std::optional<double> third_moment() const override
    {
        return dist_.third_moment();
    }
    double moment_order() const override { return dist_.abs_moment_order(); }
    nlohmann::ordered_json meta() const override
    {
        return {{"kind", "analytic"}, {"distribution", dist_.name()}};
    }

  private:
    Distribution dist_;
};

class EmpiricalNode final : public detail::CfNode
{
  public:
    EmpiricalNode(std::vector<double> xs, bool restandardized,
                  std::optional<double> m3)
        : xs_(std::move(xs)), restandardized_(restandardized), m3_(m3)
    {
    }

    CfEval eval(double xi) const override
    {
        // e^{-i t} = 1 - 2 sin^2(t/2) - i sin t, and sin t = 2 sin(t/2) cos(t/2).
        double half_sq = 0.0;
        double sin_sum = 0.0;
        for (double x : xs_)
        {
            double const h = 0.5 * xi * x;
            double const s = std::sin(h);
            double const c = std::cos(h);
            half_sq += s * s;
            sin_sum += s * c;
        }
        double const inv_n = 1.0 / static_cast<double>(xs_.size());
        double const re_deficit = 2.0 * half_sq * inv_n;
        double const im = 2.0 * sin_sum * inv_n;
        return {{1.0 - re_deficit, -im}, {re_deficit, im}};
    }

    double error_bound(double) const override
    {
        return kEmpiricalErrorConstant / std::sqrt(static_cast<double>(xs_.size()));
    }
    CfKind kind() const override { return CfKind::empirical; }
    bool is_empirical() const override { return true; }
    std::optional<double> third_moment() const override { return m3_; }
    double moment_order() const override { return kInf; }
    nlohmann::ordered_json meta() const override
    {
        return {{"kind", "empirical"},
                {"n", xs_.size()},
                {"restandardized", restandardized_}};
    }

  private:
    std::vector<double> xs_;
    bool restandardized_;
    std::optional<double> m3_;
};

class DiscountedProductNode final : public detail::CfNode
{
  public:
    DiscountedProductNode(CharFn base, double a, double tol)
        : base_(std::move(base)), a_(a), tol_(tol), length_(truncation_length(a, tol))
    {
        double const b = std::sqrt((1.0 - a) * (1.0 + a));
        weights_.resize(length_);
        for (std::size_t n = 0; n < length_; ++n)
        {
            weights_[n] = b * std::pow(a, static_cast<double>(n));
        }
        tail_variance_ = std::pow(a, 2.0 * static_cast<double>(length_));
    }

    CfEval eval(double xi) const override
    {
        // 1 - prod(1 - d_n) accumulated as D <- D + d - D d.
        std::complex<double> value = 1.0;
        std::complex<double> deficit = 0.0;
        for (double w : weights_)
        {
            CfEval const f = base_.eval(w * xi);
            value *= f.value;
            deficit += f.deficit - deficit * f.deficit;
        }
        return {value, deficit};
    }

    // |prod_{n>=N} C(u_n) - 1| <= sum u_n^2 / 2 = a^{2N} xi^2 / 2.
    double error_bound(double xi) const override
    {
        double bound = 0.5 * tail_variance_ * xi * xi;
        if (base_.is_empirical())
        {
            for (double w : weights_)
            {
                bound += base_.error_bound(w * xi);
            }
        }
        return bound;
    }

    CfKind kind() const override { return CfKind::discounted_product; }
    bool is_empirical() const override { return base_.is_empirical(); }
    std::optional<double> third_moment() const override
    {
        auto const m3 = base_.third_moment();
        if (!m3)
            return std::nullopt;
        double const b2 = (1.0 - a_) * (1.0 + a_);
        double const a3 = a_ * a_ * a_;
        double const len = static_cast<double>(length_);
        return b2 * std::sqrt(b2) * (1.0 - std::pow(a3, len)) / (1.0 - a3) * *m3;
    }
    double moment_order() const override { return base_.moment_order(); }
    nlohmann::ordered_json meta() const override
    {
        return {{"kind", "discounted_product"},
                {"a", a_},
                {"tol", tol_},
                {"truncation_length", length_},
                {"base", base_.meta()}};
    }

  private:
    CharFn base_;
    double a_;
    double tol_;
    std::size_t length_;
    std::vector<double> weights_;
    double tail_variance_;
};

class TaTransformNode final : public detail::CfNode
{
  public:
    TaTransformNode(CharFn base, CharFn g, double a)
        : base_(std::move(base)), g_(std::move(g)), a_(a),
          b_(std::sqrt((1.0 - a) * (1.0 + a)))
    {
    }

    CfEval eval(double xi) const override
    {
        CfEval const f = base_.eval(b_ * xi);
        CfEval const g = g_.eval(a_ * xi);
        return {f.value * g.value, f.deficit + g.deficit - f.deficit * g.deficit};
    }

    double error_bound(double xi) const override
    {
        return base_.error_bound(b_ * xi) + g_.error_bound(a_ * xi);
    }
    CfKind kind() const override { return CfKind::ta_transform; }
    bool is_empirical() const override
    {
        return base_.is_empirical() || g_.is_empirical();
    }
    std::optional<double> third_moment() const override
    {
        auto const mf = base_.third_moment();
        auto const mg = g_.third_moment();
        if (!mf || !mg)
            return std::nullopt;
        return b_ * b_ * b_ * *mf + a_ * a_ * a_ * *mg;
    }
    double moment_order() const override
    {
        return std::min(base_.moment_order(), g_.moment_order());
    }
    nlohmann::ordered_json meta() const override
    {
        return {{"kind", "ta_transform"},
                {"a", a_},
                {"base", base_.meta()},
                {"g", g_.meta()}};
    }

  private:
    CharFn base_;
    CharFn g_;
    double a_;
    double b_;
};

}  // namespace

std::string_view to_string(CfKind kind)
{
    switch (kind)
    {
        case CfKind::analytic:
            return "analytic";
        case CfKind::empirical:
            return "empirical";
        case CfKind::discounted_product:
            return "discounted_product";
        case CfKind::ta_transform:
            return "ta_transform";
    }
    return "unknown";
}

CharFn::CharFn(std::shared_ptr<detail::CfNode const> node) : node_(std::move(node))
{
}

CfEval CharFn::eval(double xi) const
{
    return node_->eval(xi);
}

double CharFn::error_bound(double xi) const
{
    return node_->error_bound(xi);
}

CfKind CharFn::kind() const
{
    return node_->kind();
}

bool CharFn::is_empirical() const
{
    return node_->is_empirical();
}

std::optional<double> CharFn::third_moment() const
{
    return node_->third_moment();
}

double CharFn::moment_order() const
{
    return node_->moment_order();
}

nlohmann::ordered_json CharFn::meta() const
{
    return node_->meta();
}

CharFn CharFn::gaussian()
{
    static CharFn const phi = analytic_cf(Distribution::make_standardized(Family::normal));
    return phi;
}

CharFn analytic_cf(Distribution const& dist)
{
    return CharFn(std::make_shared<AnalyticNode>(dist));
}

CharFn empirical_cf(std::span<double const> samples, bool restandardize)
{
    if (samples.empty())
    {
        throw std::invalid_argument("empirical_cf requires at least one sample");
    }
    std::vector<double> xs(samples.begin(), samples.end());
    std::optional<double> m3;
    if (restandardize)
    {
        double const n = static_cast<double>(xs.size());
        long double sum = 0.0L;
        for (double x : xs)
            sum += x;
        double const mean = static_cast<double>(sum / n);
        long double sq = 0.0L;
        for (double x : xs)
            sq += static_cast<long double>(x - mean) * (x - mean);
        double const var = static_cast<double>(sq / n);
        if (!(var > 0.0))
        {
            throw std::invalid_argument(
                "empirical_cf cannot restandardize samples with zero variance");
        }
        double const inv_sd = 1.0 / std::sqrt(var);
        long double cube = 0.0L;
        for (double& x : xs)
        {
            x = (x - mean) * inv_sd;
            cube += static_cast<long double>(x) * x * x;
        }
        m3 = static_cast<double>(cube / n);
    }
    return CharFn(std::make_shared<EmpiricalNode>(std::move(xs), restandardize, m3));
}

CharFn discounted_product_cf(CharFn const& base, double a, double tol)
{
    if (!(a > 0.0 && a < 1.0))
    {
        throw std::invalid_argument("discounted_product_cf requires a in (0,1)");
    }
    if (!(tol > 0.0))
    {
        throw std::invalid_argument("discounted_product_cf requires tol > 0");
    }
    return CharFn(std::make_shared<DiscountedProductNode>(base, a, tol));
}

CharFn apply_ta(CharFn const& base, CharFn const& g, double a)
{
    if (!(a >= 0.0 && a < 1.0))
    {
        throw std::invalid_argument("apply_ta requires a in [0,1)");
    }
    return CharFn(std::make_shared<TaTransformNode>(base, g, a));
}

}  // namespace dclt
