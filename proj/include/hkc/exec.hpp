#pragma once

namespace hkc {

// Every data-parallel kernel keeps its serial loop as the reference path.
// Both paths must produce bit-identical results.
enum class Exec { serial, parallel };

} // namespace hkc
