#pragma once

#include <string>

#include "bvs/linear.hpp"

namespace bvs {

// Header row required; first column is y, remaining columns are X.
Dataset read_dataset_csv(const std::string& path);
void write_dataset_csv(const Dataset& data, const std::string& path);

}  // namespace bvs
