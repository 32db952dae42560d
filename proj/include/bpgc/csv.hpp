#pragma once

#include <string>
#include <vector>

#include "bpgc/dataset.hpp"

namespace bpgc {

/// Reads a dataset file: header line exactly "x,y", then one observation per
/// line as a non-negative integer and a positive decimal.  LF and CRLF both
/// accepted, as is a UTF-8 byte-order mark.  Throws IoError when the file
/// cannot be opened and ParseError naming the offending line otherwise.
Dataset read_dataset(const std::string& path);

/// Writes the "x,y" header plus one row per observation, y with 17
/// significant digits so values round-trip.
void write_dataset(const std::string& path,
                   const std::vector<Observation>& rows);

}  // namespace bpgc
