#pragma once

#include <string>
#include <vector>

#include "catstream/stream.hpp"

namespace catstream {

// Pipe-separated table of a recorded run: a '#'-prefixed header, then one row
// per step with the input, the output, one column per feedback register, and
// an optional trailing loss column. Values render via value::str(), so the
// same run always produces byte-identical text.
std::string format_trace(const eval_trace& t, const std::vector<double>& losses = {});

void write_trace_file(const std::string& path, const eval_trace& t,
                      const std::vector<double>& losses = {});

}  // namespace catstream
