#include "catstream/trace_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "catstream/errors.hpp"

namespace catstream {

namespace {

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::string format_trace(const eval_trace& t, const std::vector<double>& losses) {
    std::ostringstream out;
    out << "# step|input|output";
    for (std::size_t r = 0; r < t.feedback_states.size(); ++r) out << "|state" << r;
    if (!losses.empty()) out << "|loss";
    out << "\n";
    for (std::size_t n = 0; n < t.inputs.size(); ++n) {
        out << n << "|" << t.inputs[n].str();
        out << "|" << (n < t.outputs.size() ? t.outputs[n].str() : "");
        for (const auto& reg : t.feedback_states)
            out << "|" << (n < reg.size() ? reg[n].str() : "");
        if (!losses.empty()) out << "|" << (n < losses.size() ? num(losses[n]) : "");
        out << "\n";
    }
    return out.str();
}

void write_trace_file(const std::string& path, const eval_trace& t,
                      const std::vector<double>& losses) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot write trace file: " + path);
    out << format_trace(t, losses);
}

}  // namespace catstream
