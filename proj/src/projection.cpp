#include "palettekit/projection.hpp"

#include "palettekit/error.hpp"
#include "palettekit/rng.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>

namespace palettekit {

PcaResult pca(std::span<const Point3> points) {
    PcaResult out;
    out.coords.assign(points.size(), {0.0, 0.0});
    if (points.empty()) return out;

    Eigen::MatrixXd x(static_cast<Eigen::Index>(points.size()), 3);
    for (std::size_t i = 0; i < points.size(); ++i)
        for (int c = 0; c < 3; ++c) x(static_cast<Eigen::Index>(i), c) = points[i][c];
    const Eigen::RowVector3d mean = x.colwise().mean();
    x.rowwise() -= mean;
    const Eigen::Matrix3d cov = (x.transpose() * x) / static_cast<double>(points.size());

    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(cov);
    // Eigenvalues come back ascending.
    for (int k = 0; k < 3; ++k) {
        Eigen::Vector3d axis = solver.eigenvectors().col(2 - k);
        Eigen::Index big = 0;
        axis.cwiseAbs().maxCoeff(&big);
        if (axis(big) < 0) axis = -axis;
        out.axes[k] = {axis(0), axis(1), axis(2)};
        out.variances[k] = std::max(0.0, solver.eigenvalues()(2 - k));
    }
    out.mean = {mean(0), mean(1), mean(2)};
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto r = x.row(static_cast<Eigen::Index>(i));
        for (int k = 0; k < 2; ++k)
            out.coords[i][k] = r(0) * out.axes[k][0] + r(1) * out.axes[k][1] + r(2) * out.axes[k][2];
    }
    return out;
}

namespace {

// Row-stochastic conditional affinities whose entropy matches log(perplexity).
Eigen::MatrixXd conditional_affinities(const Eigen::MatrixXd& d2, double perplexity) {
    const Eigen::Index n = d2.rows();
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
    const double target = std::log(perplexity);
    for (Eigen::Index i = 0; i < n; ++i) {
        double beta = 1.0;
        double lo = -std::numeric_limits<double>::infinity();
        double hi = std::numeric_limits<double>::infinity();
        for (int iter = 0; iter < 200; ++iter) {
            double sum = 0.0;
            double weighted = 0.0;
            for (Eigen::Index j = 0; j < n; ++j) {
                if (j == i) continue;
                const double v = std::exp(-beta * d2(i, j));
                p(i, j) = v;
                sum += v;
                weighted += d2(i, j) * v;
            }
            if (sum <= std::numeric_limits<double>::min()) sum = std::numeric_limits<double>::min();
            const double entropy = std::log(sum) + beta * weighted / sum;
            const double diff = entropy - target;
            if (std::abs(diff) < 1e-5) break;
            if (diff > 0) {
                lo = beta;
                beta = std::isinf(hi) ? beta * 2.0 : (beta + hi) / 2.0;
            } else {
                hi = beta;
                beta = std::isinf(lo) ? beta / 2.0 : (beta + lo) / 2.0;
            }
        }
        const double row = p.row(i).sum();
        if (row > 0) p.row(i) /= row;
    }
    return p;
}

} // namespace

std::vector<Point2> tsne(std::span<const Point3> points, const TsneOptions& opts) {
    const auto n = static_cast<Eigen::Index>(points.size());
    std::vector<Point2> out(points.size(), {0.0, 0.0});
    if (n < 2) return out;
    if (opts.iterations < 1 || !(opts.perplexity > 0.0))
        fail(ErrorKind::InvalidArgument, "t-SNE needs positive perplexity and iterations");

    constexpr int kExaggerationIters = 250;
    constexpr double kExaggeration = 12.0;
    constexpr double kMinGain = 0.01;

    const double learning_rate = std::max(static_cast<double>(n) / kExaggeration / 4.0, 50.0);
    const double perplexity = std::min(opts.perplexity, std::max(1.0, static_cast<double>(n - 1) / 3.0));

    Eigen::MatrixXd x(n, 3);
    for (Eigen::Index i = 0; i < n; ++i)
        for (int c = 0; c < 3; ++c) x(i, c) = points[static_cast<std::size_t>(i)][c];
    // Normalized input scale keeps the affinity search well conditioned.
    x.rowwise() -= x.colwise().mean();
    const double max_abs = x.cwiseAbs().maxCoeff();
    if (max_abs > 0) x /= max_abs;

    const Eigen::VectorXd sq = x.rowwise().squaredNorm();
    Eigen::MatrixXd d2 = (-2.0 * x * x.transpose()).colwise() + sq;
    d2.rowwise() += sq.transpose();
    d2 = d2.cwiseMax(0.0);

    Eigen::MatrixXd p = conditional_affinities(d2, perplexity);
    p = (p + p.transpose()).eval() / (2.0 * static_cast<double>(n));
    p = p.cwiseMax(1e-12);
    p.diagonal().setZero();

    Rng rng(opts.seed);
    Eigen::MatrixXd y(n, 2);
    for (Eigen::Index i = 0; i < y.size(); ++i) y.data()[i] = 1e-4 * rng.normal();
    Eigen::MatrixXd update = Eigen::MatrixXd::Zero(n, 2);
    Eigen::MatrixXd gains = Eigen::MatrixXd::Ones(n, 2);
    Eigen::MatrixXd num(n, n);
    Eigen::MatrixXd grad(n, 2);

    for (int iter = 0; iter < opts.iterations; ++iter) {
        const double exaggeration = iter < kExaggerationIters ? kExaggeration : 1.0;
        const double momentum = iter < kExaggerationIters ? 0.5 : 0.8;

        const Eigen::VectorXd ysq = y.rowwise().squaredNorm();
        num = (-2.0 * y * y.transpose()).colwise() + ysq;
        num.rowwise() += ysq.transpose();
        num = (1.0 + num.array().max(0.0)).inverse().matrix();
        num.diagonal().setZero();
        const double z = std::max(num.sum(), std::numeric_limits<double>::min());

        // grad_i = 4 * sum_j (p_ij - q_ij) * num_ij * (y_i - y_j)
        const Eigen::MatrixXd w = ((exaggeration * p).array() - num.array() / z) * num.array();
        grad = 4.0 * (w.rowwise().sum().asDiagonal() * y - w * y);

        for (Eigen::Index i = 0; i < y.size(); ++i) {
            const bool same_sign = (grad.data()[i] > 0) == (update.data()[i] > 0);
            gains.data()[i] = same_sign ? std::max(gains.data()[i] * 0.8, kMinGain) : gains.data()[i] + 0.2;
        }
        update = momentum * update - learning_rate * gains.cwiseProduct(grad);
        y += update;
        y.rowwise() -= y.colwise().mean();
    }
    for (Eigen::Index i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = {y(i, 0), y(i, 1)};
    return out;
}

ProjectionMethod projection_method_from_string(std::string_view s) {
    if (s == "pca") return ProjectionMethod::Pca;
    if (s == "tsne") return ProjectionMethod::Tsne;
    fail(ErrorKind::InvalidArgument, "projection method must be pca or tsne");
}

std::vector<ProjectedColor> project_colors_2d(const std::vector<ManifestRecord>& records, ProjectionMethod method,
                                              std::uint64_t seed) {
    if (records.empty()) fail(ErrorKind::EmptyDataset, "manifest holds no records");
    std::size_t total = 0;
    struct Group {
        Point3 sum{};
        std::size_t count = 0;
    };
    std::map<int, Group> groups;
    for (const auto& r : records)
        for (const auto& c : r.palette) {
            auto& g = groups[quantize(c).value()];
            g.sum[0] += c.l();
            g.sum[1] += c.a();
            g.sum[2] += c.b();
            ++g.count;
            ++total;
        }
    if (method == ProjectionMethod::Tsne && total > kMaxTsneColors)
        fail(ErrorKind::TooManyPoints, std::to_string(total) + " palette colors exceed the exact t-SNE cap of " +
                                           std::to_string(kMaxTsneColors));

    std::vector<ProjectedColor> out;
    std::vector<Point3> pts;
    for (const auto& [code, g] : groups) {
        const double n = static_cast<double>(g.count);
        const LabColor mean = LabColor::clamped(g.sum[0] / n, g.sum[1] / n, g.sum[2] / n);
        out.push_back({0.0, 0.0, mean, g.count});
        pts.push_back(mean.as_array());
    }
    const std::vector<Point2> xy =
        method == ProjectionMethod::Pca ? pca(pts).coords : tsne(pts, TsneOptions{30.0, 1000, seed});
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i].x = xy[i][0];
        out[i].y = xy[i][1];
    }
    return out;
}

void write_projection_csv(const std::filesystem::path& path, std::span<const ProjectedColor> points) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::Io, "cannot write " + path.string());
    out << "x,y,L,a,b,frequency\n";
    char buf[256];
    for (const auto& p : points) {
        std::snprintf(buf, sizeof buf, "%.9g,%.9g,%.6f,%.6f,%.6f,%zu\n", p.x, p.y, p.color.l(), p.color.a(),
                      p.color.b(), p.frequency);
        out << buf;
    }
}

void write_projection_svg(const std::filesystem::path& path, std::span<const ProjectedColor> points) {
    constexpr double kSize = 800.0;
    constexpr double kMargin = 40.0;
    double min_x = 0, max_x = 1, min_y = 0, max_y = 1;
    if (!points.empty()) {
        min_x = max_x = points[0].x;
        min_y = max_y = points[0].y;
        for (const auto& p : points) {
            min_x = std::min(min_x, p.x);
            max_x = std::max(max_x, p.x);
            min_y = std::min(min_y, p.y);
            max_y = std::max(max_y, p.y);
        }
    }
    const double span = std::max({max_x - min_x, max_y - min_y, 1e-12});
    std::size_t max_freq = 1;
    for (const auto& p : points) max_freq = std::max(max_freq, p.frequency);

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::Io, "cannot write " + path.string());
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" viewBox=\"0 0 %.0f %.0f\">\n",
                  kSize, kSize, kSize, kSize);
    out << buf << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
    for (const auto& p : points) {
        const double cx = kMargin + (p.x - min_x) / span * (kSize - 2 * kMargin);
        const double cy = kSize - kMargin - (p.y - min_y) / span * (kSize - 2 * kMargin);
        const double r = 2.0 + 14.0 * std::sqrt(static_cast<double>(p.frequency) / static_cast<double>(max_freq));
        std::snprintf(buf, sizeof buf, "<circle cx=\"%.3f\" cy=\"%.3f\" r=\"%.3f\" fill=\"%s\"/>\n", cx, cy, r,
                      to_hex(lab_to_srgb(p.color)).c_str());
        out << buf;
    }
    out << "</svg>\n";
}

} // namespace palettekit
