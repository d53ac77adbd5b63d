#pragma once

#include <cstdint>
#include <utility>

#include "cvxs/rng.hpp"
#include "cvxs/table.hpp"

namespace cvxs {

/// Stratified train/test split: each target class is partitioned as close to
/// `train_fraction` as rounding allows (never emptying either side), with a
/// seeded shuffle deciding which rows go where. Row order within each part
/// follows the input order. Throws Error("ClassTooSmall") when a class has
/// fewer than 2 rows.
std::pair<Table, Table> split(const Table& t, double train_fraction, std::uint64_t seed);

/// Bundled mixed-type demo data: two continuous features drawn from a
/// two-component Gaussian mixture, a 3-level ordinal, a 2-level nominal and a
/// binary target correlated with the mixture component. n must be >= 20.
Table toy_dataset(std::size_t n, std::uint64_t seed);

} // namespace cvxs
