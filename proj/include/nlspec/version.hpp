#pragma once

namespace nlspec {

// Embedded in every machine-readable output (CSV column / JSON field) so
// downstream consumers can detect format changes.
inline constexpr const char* schema_version = "nlspec-1";

}  // namespace nlspec
