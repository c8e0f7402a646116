// Copyright (c) 2026 aga contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <deque>

#include "aga/types.hpp"

namespace aga {

/// One frame of track-aligned state: embeddings and per-slot confidences,
/// stored as pushed (raw; confidence is applied at read time).
struct MemoryRecord {
    EmbeddingSet e_obj;
    EmbeddingSet e_app;
    Eigen::VectorXd conf;  // per track slot, in [0, 1]
};

struct MemoryReadout {
    EmbeddingSet m_obj;
    EmbeddingSet m_app;
};

/// Sliding window over the last W frames of per-track state. The readout is
/// the confidence- and recency-weighted sum
///
///   m_k = sum over ages w = 1..min(W, count) of  e_k^(w) * conf_k^(w) * (W / w)
///
/// with age 1 the newest record. No normalization is applied; the downstream
/// cosine similarity is scale invariant.
class MemoryBank {
  public:
    MemoryBank(int window, Eigen::Index slots, Eigen::Index dim);

    void push(const EmbeddingSet& e_obj, const EmbeddingSet& e_app,
              const Eigen::VectorXd& conf);

    MemoryReadout read_memory() const;

    int window() const { return window_; }
    Eigen::Index slots() const { return slots_; }
    Eigen::Index dim() const { return dim_; }
    bool empty() const { return records_.empty(); }
    std::size_t size() const { return records_.size(); }

    /// Stored records, newest last. Exposed for inspection and test oracles.
    const std::deque<MemoryRecord>& records() const { return records_; }

  private:
    int window_;
    Eigen::Index slots_;
    Eigen::Index dim_;
    std::deque<MemoryRecord> records_;  // newest last, at most window_ entries
};

}  // namespace aga
