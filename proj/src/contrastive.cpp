// Copyright (c) 2026 aga contributors
// SPDX-License-Identifier: Apache-2.0

#include "aga/contrastive.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "aga/rng.hpp"

namespace aga {

namespace {

void check_pair(const ContrastivePair& p) {
    require(p.key.size() >= 1, "contrastive_loss: empty key");
    require(!p.positives.empty(), "contrastive_loss: at least one positive required");
    for (const auto& v : p.positives) {
        require(v.size() == p.key.size(), "contrastive_loss: positive dimension mismatch");
    }
    for (const auto& v : p.negatives) {
        require(v.size() == p.key.size(), "contrastive_loss: negative dimension mismatch");
    }
}

}  // namespace

LossReport contrastive_loss(const ContrastivePair& p) {
    check_pair(p);

    const std::size_t np = p.positives.size();
    const std::size_t nn = p.negatives.size();

    LossReport report;
    report.grad_key = Eigen::VectorXd::Zero(p.key.size());
    report.grad_positives.assign(np, Eigen::VectorXd::Zero(p.key.size()));
    report.grad_negatives.assign(nn, Eigen::VectorXd::Zero(p.key.size()));

    if (nn == 0) {
        report.value = 0.0;  // log(1 + empty sum)
        return report;
    }

    // z_{np} = v.kn - v.kp; stabilize against the implicit exp(0) = 1 term.
    std::vector<double> pos_dot(np), neg_dot(nn);
    for (std::size_t i = 0; i < np; ++i) pos_dot[i] = p.key.dot(p.positives[i]);
    for (std::size_t j = 0; j < nn; ++j) neg_dot[j] = p.key.dot(p.negatives[j]);

    double zmax = 0.0;
    for (std::size_t j = 0; j < nn; ++j) {
        for (std::size_t i = 0; i < np; ++i) {
            zmax = std::max(zmax, neg_dot[j] - pos_dot[i]);
        }
    }

    double denom = std::exp(-zmax);  // the "1 +" term
    for (std::size_t j = 0; j < nn; ++j) {
        for (std::size_t i = 0; i < np; ++i) {
            denom += std::exp(neg_dot[j] - pos_dot[i] - zmax);
        }
    }
    report.value = zmax + std::log(denom);

    for (std::size_t j = 0; j < nn; ++j) {
        double wj = 0.0;  // sum over positives of the softmax weight
        for (std::size_t i = 0; i < np; ++i) {
            const double w = std::exp(neg_dot[j] - pos_dot[i] - zmax) / denom;
            wj += w;
            report.grad_key += w * (p.negatives[j] - p.positives[i]);
            report.grad_positives[i] -= w * p.key;
        }
        report.grad_negatives[j] = wj * p.key;
    }

    return report;
}

double gradient_check(const ContrastivePair& p, double eps) {
    require(eps > 0.0 && eps <= 1e-3, "gradient_check: eps must lie in (0, 1e-3]");

    const LossReport analytic = contrastive_loss(p);
    ContrastivePair mutable_pair = p;

    double max_rel = 0.0;
    auto probe = [&](Eigen::VectorXd& slot, const Eigen::VectorXd& grad) {
        for (Eigen::Index c = 0; c < slot.size(); ++c) {
            const double orig = slot[c];
            slot[c] = orig + eps;
            const double up = contrastive_loss(mutable_pair).value;
            slot[c] = orig - eps;
            const double down = contrastive_loss(mutable_pair).value;
            slot[c] = orig;
            const double fd = (up - down) / (2.0 * eps);
            const double rel =
                std::abs(fd - grad[c]) / std::max({1.0, std::abs(fd), std::abs(grad[c])});
            max_rel = std::max(max_rel, rel);
        }
    };

    probe(mutable_pair.key, analytic.grad_key);
    for (std::size_t i = 0; i < mutable_pair.positives.size(); ++i) {
        probe(mutable_pair.positives[i], analytic.grad_positives[i]);
    }
    for (std::size_t j = 0; j < mutable_pair.negatives.size(); ++j) {
        probe(mutable_pair.negatives[j], analytic.grad_negatives[j]);
    }
    return max_rel;
}

double cosine_silhouette(const std::vector<Eigen::VectorXd>& embeddings,
                         const std::vector<int>& labels) {
    require(embeddings.size() == labels.size(), "cosine_silhouette: size mismatch");
    require(embeddings.size() >= 2, "cosine_silhouette: need at least two samples");

    const std::size_t n = embeddings.size();
    auto cos_dist = [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
        const double na = a.norm(), nb = b.norm();
        if (na == 0.0 || nb == 0.0) return 1.0;
        return 1.0 - a.dot(b) / (na * nb);
    };

    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        std::map<int, std::pair<double, int>> per_label;  // label -> (dist sum, count)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            auto& [sum, count] = per_label[labels[j]];
            sum += cos_dist(embeddings[i], embeddings[j]);
            ++count;
        }
        const auto own = per_label.find(labels[i]);
        require(own != per_label.end() && own->second.second > 0,
                "cosine_silhouette: every identity needs at least two samples");
        const double a = own->second.first / own->second.second;
        double b = std::numeric_limits<double>::infinity();
        for (const auto& [label, agg] : per_label) {
            if (label == labels[i]) continue;
            b = std::min(b, agg.first / agg.second);
        }
        require(std::isfinite(b), "cosine_silhouette: need at least two identities");
        const double denom = std::max(a, b);
        total += denom > 0.0 ? (b - a) / denom : 0.0;
    }
    return total / static_cast<double>(n);
}

RefineResult refine_embeddings(const std::vector<Eigen::VectorXd>& embeddings,
                               const std::vector<int>& labels,
                               const RefineOptions& opt) {
    require(embeddings.size() == labels.size(), "refine_embeddings: size mismatch");
    require(opt.steps >= 0 && opt.lr >= 0.0, "refine_embeddings: bad options");

    std::map<int, std::vector<int>> by_label;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        by_label[labels[i]].push_back(static_cast<int>(i));
    }
    require(by_label.size() >= 2, "refine_embeddings: need at least two identities");
    for (const auto& [label, members] : by_label) {
        require(members.size() >= 2, "refine_embeddings: every identity needs >= 2 samples");
    }

    RefineResult result;
    result.embeddings = embeddings;
    result.silhouette_before = cosine_silhouette(embeddings, labels);

    Rng rng(mix_seed(opt.seed));
    auto sample_subset = [&](std::vector<int> pool, int limit) {
        if (limit <= 0 || static_cast<int>(pool.size()) <= limit) return pool;
        rng.shuffle(pool);
        pool.resize(limit);
        std::sort(pool.begin(), pool.end());
        return pool;
    };

    const std::size_t n = embeddings.size();
    std::vector<Eigen::VectorXd> grads(n);
    for (int step = 0; step < opt.steps; ++step) {
        for (auto& g : grads) g = Eigen::VectorXd::Zero(embeddings[0].size());

        for (std::size_t key = 0; key < n; ++key) {
            std::vector<int> pos_pool = by_label[labels[key]];
            pos_pool.erase(std::find(pos_pool.begin(), pos_pool.end(), static_cast<int>(key)));
            std::vector<int> neg_pool;
            for (const auto& [label, members] : by_label) {
                if (label == labels[key]) continue;
                neg_pool.insert(neg_pool.end(), members.begin(), members.end());
            }
            const std::vector<int> pos = sample_subset(pos_pool, opt.refs_per_key);
            const std::vector<int> neg = sample_subset(neg_pool, opt.refs_per_key);

            ContrastivePair pair;
            pair.key = result.embeddings[key];
            for (int i : pos) pair.positives.push_back(result.embeddings[i]);
            for (int j : neg) pair.negatives.push_back(result.embeddings[j]);

            const LossReport report = contrastive_loss(pair);
            const double scale = opt.loss_weight / static_cast<double>(n);
            grads[key] += scale * report.grad_key;
            for (std::size_t i = 0; i < pos.size(); ++i) {
                grads[pos[i]] += scale * report.grad_positives[i];
            }
            for (std::size_t j = 0; j < neg.size(); ++j) {
                grads[neg[j]] += scale * report.grad_negatives[j];
            }
            if (step == opt.steps - 1) {
                result.final_loss += scale * report.value;
            }
        }

        if (opt.lr > 0.0) {
            for (std::size_t i = 0; i < n; ++i) {
                result.embeddings[i] -= opt.lr * grads[i];
            }
        }
    }

    result.silhouette_after = cosine_silhouette(result.embeddings, labels);
    return result;
}

}  // namespace aga
