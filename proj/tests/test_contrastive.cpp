// Copyright (c) 2026 aga contributors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "aga/contrastive.hpp"
#include "aga/rng.hpp"

using aga::ContrastivePair;
using aga::contrastive_loss;
using aga::cosine_silhouette;
using aga::gradient_check;
using aga::LossReport;
using aga::refine_embeddings;
using aga::RefineOptions;
using aga::RefineResult;
using aga::Rng;

namespace {

Eigen::VectorXd vec2(double x, double y) {
    Eigen::VectorXd v(2);
    v << x, y;
    return v;
}

ContrastivePair random_pair(Rng& rng, int dim, int n_pos, int n_neg, double scale) {
    auto draw = [&] {
        Eigen::VectorXd v(dim);
        for (int d = 0; d < dim; ++d) v[d] = scale * rng.normal();
        return v;
    };
    ContrastivePair p;
    p.key = draw();
    for (int i = 0; i < n_pos; ++i) p.positives.push_back(draw());
    for (int j = 0; j < n_neg; ++j) p.negatives.push_back(draw());
    return p;
}

}  // namespace

TEST_CASE("empty negative set gives zero loss and zero gradients") {
    ContrastivePair p;
    p.key = vec2(1.0, 0.0);
    p.positives = {vec2(1.0, 0.0)};
    const LossReport r = contrastive_loss(p);
    CHECK(r.value == 0.0);
    CHECK(r.grad_key.isZero(0.0));
    CHECK(r.grad_positives[0].isZero(0.0));
}

TEST_CASE("closed-form evaluation of the two-reference pair") {
    ContrastivePair p;
    p.key = vec2(1.0, 0.0);
    p.positives = {vec2(1.0, 0.0)};
    p.negatives = {vec2(-1.0, 0.0)};
    const LossReport r = contrastive_loss(p);
    // log(1 + exp(-1 - 1))
    CHECK(r.value == doctest::Approx(0.12692801104297263).epsilon(1e-14));
    CHECK(r.value == doctest::Approx(std::log1p(std::exp(-2.0))).epsilon(1e-14));
}

TEST_CASE("swapping a positive and a negative strictly increases the loss") {
    Rng rng(606);
    for (int trial = 0; trial < 50; ++trial) {
        ContrastivePair p = random_pair(rng, 4, 1, 1, 1.0);
        // orient the pair so the positive is the better-aligned reference
        if (p.key.dot(p.positives[0]) < p.key.dot(p.negatives[0])) {
            std::swap(p.positives[0], p.negatives[0]);
        }
        if (p.key.dot(p.positives[0]) == p.key.dot(p.negatives[0])) continue;
        const double base = contrastive_loss(p).value;
        ContrastivePair swapped = p;
        std::swap(swapped.positives[0], swapped.negatives[0]);
        const double after = contrastive_loss(swapped).value;
        CHECK(after > base);
    }
}

TEST_CASE("loss is non-negative") {
    Rng rng(607);
    for (int trial = 0; trial < 50; ++trial) {
        const ContrastivePair p = random_pair(rng, 3, 2, 3, 2.0);
        CHECK(contrastive_loss(p).value >= 0.0);
    }
}

TEST_CASE("loss survives large magnitudes without overflow") {
    ContrastivePair p;
    p.key = vec2(30.0, 0.0);
    p.positives = {vec2(-30.0, 0.0)};
    p.negatives = {vec2(30.0, 0.0)};
    const LossReport r = contrastive_loss(p);
    CHECK(std::isfinite(r.value));
    CHECK(r.value == doctest::Approx(1800.0).epsilon(1e-12));  // z = 900 + 900 dominates
}

TEST_CASE("loss is invariant under simultaneous rotation") {
    Rng rng(608);
    const ContrastivePair p = random_pair(rng, 2, 2, 2, 1.0);
    const double angle = 1.234;
    Eigen::Matrix2d rot;
    rot << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
    ContrastivePair q = p;
    q.key = rot * q.key;
    for (auto& v : q.positives) v = rot * v;
    for (auto& v : q.negatives) v = rot * v;
    CHECK(contrastive_loss(q).value ==
          doctest::Approx(contrastive_loss(p).value).epsilon(1e-12));
}

TEST_CASE("analytic gradients match finite differences on seeded pairs") {
    Rng rng(609);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const int dim = rng.uniform_int(2, 6);
        const ContrastivePair p =
            random_pair(rng, dim, rng.uniform_int(1, 3), rng.uniform_int(0, 3), 1.0);
        worst = std::max(worst, gradient_check(p, 1e-5));
    }
    CHECK(worst < 1e-5);
}

TEST_CASE("gradient check holds at norm-10 magnitudes") {
    Rng rng(610);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        ContrastivePair p = random_pair(rng, 4, 2, 2, 1.0);
        auto rescale = [](Eigen::VectorXd& v) { v *= 10.0 / v.norm(); };
        rescale(p.key);
        for (auto& v : p.positives) rescale(v);
        for (auto& v : p.negatives) rescale(v);
        worst = std::max(worst, gradient_check(p, 1e-5));
    }
    CHECK(worst < 1e-4);
}

TEST_CASE("zero-gradient case agrees with finite differences") {
    ContrastivePair p;
    p.key = vec2(1.0, 0.0);
    p.positives = {vec2(1.0, 0.0)};
    CHECK(gradient_check(p, 1e-5) < 1e-9);
}

TEST_CASE("contract violations") {
    ContrastivePair p;
    p.key = vec2(1.0, 0.0);
    CHECK_THROWS_AS(contrastive_loss(p), std::invalid_argument);  // no positives
    p.positives = {Eigen::VectorXd::Ones(3)};
    CHECK_THROWS_AS(contrastive_loss(p), std::invalid_argument);  // dim mismatch
    p.positives = {vec2(1.0, 0.0)};
    CHECK_THROWS_AS(gradient_check(p, 0.5), std::invalid_argument);  // eps too large
}

namespace {

void gaussian_identities(Rng& rng, double separation, int per_class, int dim,
                         std::vector<Eigen::VectorXd>& embeddings, std::vector<int>& labels) {
    for (int label = 0; label < 2; ++label) {
        Eigen::VectorXd mean = Eigen::VectorXd::Zero(dim);
        mean[0] = label == 0 ? separation : -separation;
        for (int i = 0; i < per_class; ++i) {
            Eigen::VectorXd v = mean;
            for (int d = 0; d < dim; ++d) v[d] += 0.05 * rng.normal();
            embeddings.push_back(v);
            labels.push_back(label);
        }
    }
}

}  // namespace

TEST_CASE("well-separated identities keep a high silhouette through refinement") {
    Rng rng(611);
    std::vector<Eigen::VectorXd> embeddings;
    std::vector<int> labels;
    gaussian_identities(rng, 1.0, 8, 4, embeddings, labels);

    RefineOptions opt;
    opt.steps = 50;
    opt.lr = 0.02;
    const RefineResult r = refine_embeddings(embeddings, labels, opt);
    CHECK(r.silhouette_before > 0.8);
    CHECK(r.silhouette_after >= r.silhouette_before - 1e-9);
}

TEST_CASE("coincident identities separate under refinement across seeds") {
    for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
        Rng rng(seed);
        std::vector<Eigen::VectorXd> embeddings;
        std::vector<int> labels;
        // both identities drawn around the same mean
        for (int label = 0; label < 2; ++label) {
            for (int i = 0; i < 6; ++i) {
                Eigen::VectorXd v(4);
                v << 1.0, 0.5, -0.5, 0.2;
                for (int d = 0; d < 4; ++d) v[d] += 0.2 * rng.normal();
                embeddings.push_back(v);
                labels.push_back(label);
            }
        }
        RefineOptions opt;
        opt.steps = 150;
        opt.lr = 0.05;
        opt.seed = seed;
        const RefineResult r = refine_embeddings(embeddings, labels, opt);
        CHECK(std::abs(r.silhouette_before) < 0.2);
        CHECK(r.silhouette_after > r.silhouette_before);
    }
}

TEST_CASE("lr = 0 leaves embeddings bitwise unchanged") {
    Rng rng(612);
    std::vector<Eigen::VectorXd> embeddings;
    std::vector<int> labels;
    gaussian_identities(rng, 0.5, 4, 3, embeddings, labels);
    RefineOptions opt;
    opt.steps = 10;
    opt.lr = 0.0;
    const RefineResult r = refine_embeddings(embeddings, labels, opt);
    for (std::size_t i = 0; i < embeddings.size(); ++i) {
        CHECK(r.embeddings[i] == embeddings[i]);
    }
}

TEST_CASE("single identity is refused") {
    std::vector<Eigen::VectorXd> embeddings = {vec2(1, 0), vec2(0, 1)};
    std::vector<int> labels = {0, 0};
    CHECK_THROWS_AS(refine_embeddings(embeddings, labels), std::invalid_argument);
}

TEST_CASE("refs_per_key subsampling still refines") {
    Rng rng(613);
    std::vector<Eigen::VectorXd> embeddings;
    std::vector<int> labels;
    gaussian_identities(rng, 0.05, 6, 4, embeddings, labels);
    RefineOptions opt;
    opt.steps = 100;
    opt.lr = 0.05;
    opt.refs_per_key = 2;
    const RefineResult r = refine_embeddings(embeddings, labels, opt);
    CHECK(r.silhouette_after > r.silhouette_before);
}

TEST_CASE("silhouette contract") {
    std::vector<Eigen::VectorXd> embeddings = {vec2(1, 0), vec2(0, 1), vec2(1, 1)};
    CHECK_THROWS_AS(cosine_silhouette(embeddings, {0, 0, 1}), std::invalid_argument);
}
