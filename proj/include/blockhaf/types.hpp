// Copyright 2026 The blockhaf Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace blockhaf {

using Complex = std::complex<double>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using CMatrix = Matrix<Complex>;
using CVector = Vector<Complex>;
using RMatrix = Matrix<double>;
using RVector = Vector<double>;

// Photon-number pattern, one entry per mode or per block.
using Pattern = std::vector<int>;

// A partition of {0..M-1} into ordered blocks of mode indices.
using Partition = std::vector<std::vector<std::size_t>>;

// M external modes, each with K internal modes. Internal mode l of external k
// sits at index k*K + l.
struct ModeLayout {
  std::size_t externals = 0;
  std::size_t internals = 1;

  std::size_t total() const { return externals * internals; }
  std::size_t index(std::size_t external, std::size_t internal) const {
    return external * internals + internal;
  }
  // Blocks {k*K, ..., k*K+K-1} for every external k.
  Partition external_blocks() const;
};

inline constexpr const char* kVersion = "0.1.0";

}  // namespace blockhaf
