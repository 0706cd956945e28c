#pragma once

#include <filesystem>
#include <iosfwd>

#include "mlccp/conformal.hpp"
#include "mlccp/mlrbf.hpp"

namespace mlccp {

// Line-oriented text containers with a version tag. Reals are written as
// hexadecimal floating point, so a save/load cycle is bit-exact.
void save_rbf(const RbfModel& model, std::ostream& out);
RbfModel load_rbf(std::istream& in);

void save_ccp(const CcpModel& model, std::ostream& out);
CcpModel load_ccp(std::istream& in);

void save_ccp(const CcpModel& model, const std::filesystem::path& path);
CcpModel load_ccp(const std::filesystem::path& path);

}  // namespace mlccp
