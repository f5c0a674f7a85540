#include <sss/bench.hpp>

#include <fstream>
#include <iomanip>

namespace sss
{
    namespace
    {
        std::ofstream open_csv(const std::filesystem::path& path)
        {
            if (path.has_parent_path())
            {
                std::filesystem::create_directories(path.parent_path());
            }
            std::ofstream out(path, std::ios::binary | std::ios::trunc);
            if (!out)
            {
                throw Error("cannot write " + path.string());
            }
            out << std::setprecision(17);
            return out;
        }
    } // namespace

    void write_trajectory_csv(std::ostream& out, const BenchOptions& options, const std::vector<MethodSummary>& methods)
    {
        out << "method,function,d,seed,iteration,residual\n";
        for (const auto& m : methods)
        {
            for (std::size_t s = 0; s < options.seeds.size(); ++s)
            {
                for (int it = 0; it < options.iterations; ++it)
                {
                    out << m.name << ',' << function_name(options.function) << ',' << options.dimension << ','
                        << options.seeds[s] << ',' << it + 1 << ','
                        << m.result.residuals(static_cast<Eigen::Index>(s), it) << '\n';
                }
            }
        }
    }

    void write_summary_csv(std::ostream& out, const BenchOptions& options, const std::vector<MethodSummary>& methods)
    {
        out << "method,function,d,iteration,mean,std\n";
        for (const auto& m : methods)
        {
            for (int it = 0; it < options.iterations; ++it)
            {
                out << m.name << ',' << function_name(options.function) << ',' << options.dimension << ',' << it + 1
                    << ',' << m.result.mean(it) << ',' << m.result.stddev(it) << '\n';
            }
        }
    }

    BenchOutput run_bench(const BenchOptions& options)
    {
        if (options.methods.empty())
        {
            throw Error("bench needs at least one method");
        }
        BenchOutput output;
        for (const auto& method : options.methods)
        {
            StudyConfig config;
            config.function          = TestFunction::make(options.function, options.dimension);
            config.method            = method;
            config.iterations        = options.iterations;
            config.seeds             = options.seeds;
            config.oracle_resolution = options.oracle_resolution;
            output.methods.push_back({method.name(), run_study(config)});
        }

        output.trajectories = options.output_prefix + "_trajectories.csv";
        output.summary      = options.output_prefix + "_summary.csv";
        {
            auto out = open_csv(output.trajectories);
            write_trajectory_csv(out, options, output.methods);
        }
        {
            auto out = open_csv(output.summary);
            write_summary_csv(out, options, output.methods);
        }
        return output;
    }
} // namespace sss
