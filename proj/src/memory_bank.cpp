// Copyright (c) 2026 aga contributors
// SPDX-License-Identifier: Apache-2.0

#include "aga/memory_bank.hpp"

namespace aga {

MemoryBank::MemoryBank(int window, Eigen::Index slots, Eigen::Index dim)
    : window_(window), slots_(slots), dim_(dim) {
    require(window >= 1, "MemoryBank: window must be >= 1");
    require(slots >= 1 && dim >= 1, "MemoryBank: slots and dim must be >= 1");
}

void MemoryBank::push(const EmbeddingSet& e_obj, const EmbeddingSet& e_app,
                      const Eigen::VectorXd& conf) {
    require(e_obj.n() == slots_ && e_obj.dim() == dim_, "MemoryBank::push: e_obj shape mismatch");
    require(e_app.n() == slots_ && e_app.dim() == dim_, "MemoryBank::push: e_app shape mismatch");
    require(conf.size() == slots_, "MemoryBank::push: confidence size mismatch");
    require((conf.array() >= 0.0).all() && (conf.array() <= 1.0).all(),
            "MemoryBank::push: confidences must lie in [0, 1]");
    require(e_obj.vectors.allFinite() && e_app.vectors.allFinite(),
            "MemoryBank::push: non-finite embedding");

    records_.push_back(MemoryRecord{e_obj, e_app, conf});
    if (records_.size() > static_cast<std::size_t>(window_)) {
        records_.pop_front();
    }
}

MemoryReadout MemoryBank::read_memory() const {
    require(!records_.empty(), "MemoryBank::read_memory: bank is empty");

    Eigen::MatrixXd m_obj = Eigen::MatrixXd::Zero(slots_, dim_);
    Eigen::MatrixXd m_app = Eigen::MatrixXd::Zero(slots_, dim_);

    int age = 1;  // 1 = newest
    for (auto it = records_.rbegin(); it != records_.rend(); ++it, ++age) {
        const double recency = static_cast<double>(window_) / static_cast<double>(age);
        const Eigen::VectorXd w = it->conf * recency;  // per-slot weight
        m_obj += w.asDiagonal() * it->e_obj.vectors;
        m_app += w.asDiagonal() * it->e_app.vectors;
    }

    return MemoryReadout{EmbeddingSet(std::move(m_obj)), EmbeddingSet(std::move(m_app))};
}

}  // namespace aga
