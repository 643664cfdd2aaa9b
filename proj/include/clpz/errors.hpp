#pragma once

#include <stdexcept>
#include <string>

namespace clpz {

// Query-level error, printed as error(<kind>, <detail>).
struct PrologError : std::runtime_error {
    std::string kind;
    std::string detail;
    PrologError(std::string k, std::string d)
        : std::runtime_error("error(" + k + "," + d + ")"),
          kind(std::move(k)),
          detail(std::move(d)) {}
};

}  // namespace clpz
