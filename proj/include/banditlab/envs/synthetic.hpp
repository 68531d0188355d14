#pragma once

#include <cstdint>
#include <vector>

#include "banditlab/envs/dataset.hpp"

namespace banditlab::envs {

// Deterministic synthetic tables for experiments that normally read data
// from disk.  Both generators standardize feature columns the same way the
// loader does.

// Integer-coded table with a binary label that is a linear threshold of the
// raw codes; rows inside a small margin band around the threshold are
// discarded so the two classes are cleanly separable.  Roughly half the rows
// are labelled "poisonous".
DatasetTable synth_mushroom_table(std::size_t rows, std::size_t num_features,
                                  std::uint64_t seed);

// Gaussian blobs: one unit-variance cluster per class with centers drawn
// from N(0, separation^2 I), class frequencies given by probs.
DatasetTable synth_blobs_table(std::size_t rows, std::size_t dim,
                               const std::vector<double>& class_probs,
                               double separation, std::uint64_t seed);

}  // namespace banditlab::envs
