// SPDX-License-Identifier: MIT
//
// The four dynamical descriptions the library can evaluate.

#pragma once

#include <optional>
#include <string>

namespace qdyn {

enum class Method { Markovian, PostMarkovian, MemoryKernel, Exact };

std::string method_name(Method m);
std::optional<Method> method_from_name(const std::string& name);

}  // namespace qdyn
