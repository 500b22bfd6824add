#pragma once

#include <filesystem>
#include <string>

#include "tdhinf/system_model.hpp"

namespace tdhinf {

/// Malformed system document. The message names the offending member and,
/// for arrays, the index.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Reads a system document:
///
///     { "n": 1, "nu": 1, "ny": 1,
///       "A0": [-3],
///       "delays": [ { "tau": 1.0, "A": [1] } ],
///       "B": [1], "C": [1], "D": [0] }
///
/// Matrices are flat row-major arrays. "delays" may be omitted or empty.
DelaySystem parse_system(const std::string& text);
DelaySystem load_system(const std::filesystem::path& path);

/// Inverse of parse_system; doubles are written in shortest round-trip form.
std::string write_system(const DelaySystem& sys);

}  // namespace tdhinf
