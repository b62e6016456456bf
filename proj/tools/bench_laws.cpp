// Times the law suites with the OpenMP fan-out against the serial reference
// path. Both run the same instances; the checkers merge deterministically, so
// the reports must agree exactly.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "catstream/laws.hpp"

using namespace catstream;

namespace {

double run_suites(const law_options& opt, std::vector<law_report>& out) {
    auto start = std::chrono::steady_clock::now();
    out = check_feedback_axioms(opt);
    for (law_report& r : check_stream_laws(opt)) out.push_back(std::move(r));
    for (law_report& r : check_diagram_laws(opt)) out.push_back(std::move(r));
    auto stop = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(stop - start).count();
}

}  // namespace

int main(int argc, char** argv) {
    law_options opt;
    opt.instances = argc > 1 ? static_cast<std::size_t>(std::strtoull(argv[1], nullptr, 10))
                             : 400;
    opt.seed = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 0;

    std::vector<law_report> parallel_reports, serial_reports;
    opt.parallel = true;
    double tp = run_suites(opt, parallel_reports);
    opt.parallel = false;
    double ts = run_suites(opt, serial_reports);

    bool same = parallel_reports.size() == serial_reports.size();
    for (std::size_t i = 0; same && i < parallel_reports.size(); ++i)
        same = parallel_reports[i].name == serial_reports[i].name &&
               parallel_reports[i].instances == serial_reports[i].instances &&
               parallel_reports[i].failures == serial_reports[i].failures &&
               parallel_reports[i].counterexample == serial_reports[i].counterexample;

    std::printf("laws: %zu suites, %zu instances each, seed %llu\n", parallel_reports.size(),
                opt.instances, static_cast<unsigned long long>(opt.seed));
    std::printf("parallel: %.3fs\n", tp);
    std::printf("serial:   %.3fs\n", ts);
    std::printf("speedup:  %.2fx\n", ts / tp);
    std::printf("reports identical: %s\n", same ? "yes" : "NO");
    if (!same) return 1;
    if (!all_passed(parallel_reports)) {
        std::fputs(format_reports(parallel_reports).c_str(), stdout);
        return 1;
    }
    return 0;
}
