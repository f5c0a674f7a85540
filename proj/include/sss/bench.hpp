#pragma once

#include <sss/harness.hpp>

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace sss
{
    struct BenchOptions
    {
        FunctionKind               function = FunctionKind::sphere;
        std::vector<MethodSpec>    methods;
        int                        dimension  = 32;
        int                        iterations = 20;
        std::vector<std::uint64_t> seeds;
        int                        oracle_resolution = 15;
        std::string                output_prefix     = "bench";
    };

    struct MethodSummary
    {
        std::string name;
        StudyResult result;
    };

    struct BenchOutput
    {
        std::filesystem::path      trajectories;
        std::filesystem::path      summary;
        std::vector<MethodSummary> methods;
    };

    /// Runs one study per method and writes `<prefix>_trajectories.csv` and `<prefix>_summary.csv`.
    BenchOutput run_bench(const BenchOptions& options);

    /// Header `method,function,d,seed,iteration,residual`; iterations are 1-based.
    void write_trajectory_csv(std::ostream& out, const BenchOptions& options, const std::vector<MethodSummary>& methods);
    /// Header `method,function,d,iteration,mean,std`.
    void write_summary_csv(std::ostream& out, const BenchOptions& options, const std::vector<MethodSummary>& methods);
} // namespace sss
