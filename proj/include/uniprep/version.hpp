#pragma once

namespace uniprep {

/// Library and CLI version, embedded in every machine-readable output so
/// experiment files can be traced back to the code that produced them.
inline constexpr const char* kVersion = "0.1.0";

}  // namespace uniprep
