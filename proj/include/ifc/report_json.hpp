#pragma once

#include "ifc/model.hpp"
#include "ifc/serialize.hpp"

// JSON documents emitted by the command-line tool. Subsets and orderings are
// 1-based; complex numbers are [re, im]; infinite values become null.
namespace ifc {

json to_json(const OptimizerConfig& cfg);
json to_json(const RateInequality& ineq);
json to_json(const BoundReport& report);
json to_json(const Certificate& cert);

}  // namespace ifc
