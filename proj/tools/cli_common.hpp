#pragma once

#include <cstdio>
#include <exception>
#include <functional>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "edi/error.hpp"
#include "edi/shaping.hpp"

namespace edi::cli {

/// Shaping spec from --config, or PS-64QAM at blocklength n when no file is given.
/// With both, --n re-quantizes the file's PMF.
inline ShapingSpec shaping_from(const std::string& path, std::optional<std::size_t> n) {
    if (path.empty()) return ShapingSpec{AmplitudeAlphabet::pam(4), ps64_composition(n.value_or(10))};
    ShapingSpec spec = load_shaping_spec(path);
    if (n && *n != spec.composition.blocklength()) {
        const auto pmf = spec.composition.pmf();
        spec.composition = composition_from_pmf(spec.composition.levels(), pmf, *n);
    }
    return spec;
}

/// Exit codes: 0 ok, 1 usage, 2 toolkit error, 3 anything else.
inline int guarded(const std::function<void()>& body) {
    try {
        body();
        return 0;
    } catch (const edi::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << '\n';
        return 3;
    }
}

}  // namespace edi::cli
