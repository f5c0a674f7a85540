// Command-line entry points: `sss bench` runs the simulated-user study and writes CSVs,
// `sss serve` exposes interactive sessions over HTTP.

#include <sss/bench.hpp>
#include <sss/service.hpp>

#include <CLI11.hpp>
#include <httplib.h>

#include <csignal>
#include <cstdlib>
#include <iostream>
#include <sstream>

namespace
{
    constexpr int kUsageError   = 2;
    constexpr int kRuntimeError = 1;

    std::vector<std::string> split(const std::string& text, char sep)
    {
        std::vector<std::string> parts;
        std::stringstream        in(text);
        std::string              item;
        while (std::getline(in, item, sep))
        {
            if (!item.empty())
            {
                parts.push_back(item);
            }
        }
        return parts;
    }

    // "5" means seeds 1..5; "3,7,9" lists them.
    std::vector<std::uint64_t> parse_seeds(const std::string& text)
    {
        std::vector<std::uint64_t> seeds;
        if (text.find(',') == std::string::npos)
        {
            const auto n = std::stoull(text);
            for (std::uint64_t s = 1; s <= n; ++s)
            {
                seeds.push_back(s);
            }
        }
        else
        {
            for (const auto& p : split(text, ','))
            {
                seeds.push_back(std::stoull(p));
            }
        }
        if (seeds.empty())
        {
            throw sss::Error("no seeds given");
        }
        return seeds;
    }

    httplib::Server* g_server = nullptr;

    void stop_server(int)
    {
        if (g_server != nullptr)
        {
            g_server->stop();
        }
    }
} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Multi-slider preferential Bayesian optimization"};
    app.require_subcommand(1);

    auto*       bench = app.add_subcommand("bench", "Run the simulated-user benchmark study");
    std::string function_name;
    std::string methods_text = "sliders4,slider1,random";
    std::string seeds_text   = "10";
    int         dimension    = 32;
    int         iterations   = 20;
    int         resolution   = 15;
    std::string out_prefix   = "bench";
    bench->add_option("--function", function_name, "sphere | rosenbrock | rosenbrock_paper | rosenbrock_standard")
        ->required();
    bench->add_option("--methods", methods_text, "Comma-separated: sliders<c>, slider1, random, pointwise");
    bench->add_option("--d", dimension, "Dimension")->check(CLI::PositiveNumber);
    bench->add_option("--iterations", iterations, "Rounds per trial")->check(CLI::PositiveNumber);
    bench->add_option("--seeds", seeds_text, "Seed count N (seeds 1..N) or a comma-separated list");
    bench->add_option("--oracle-resolution", resolution, "Simplex lattice steps for the simulated user")
        ->check(CLI::PositiveNumber);
    bench->add_option("--out", out_prefix, "Output prefix for <prefix>_trajectories.csv and <prefix>_summary.csv");

    auto*             serve = app.add_subcommand("serve", "Serve interactive sessions over HTTP");
    sss::ServiceOptions service_options;
    std::string       host = "127.0.0.1";
    int               port = 8080;
    if (const char* env = std::getenv("PORT"))
    {
        port = std::atoi(env);
    }
    // CLI11 only reads config files from the root app; options live under [serve]
    app.set_config("--config", "", "TOML/INI file, serve options under a [serve] section");
    serve->fallthrough();
    serve->add_option("--host", host, "Bind address");
    serve->add_option("--port", port, "Port (defaults to $PORT or 8080)")->check(CLI::Range(1, 65535));
    serve->add_option("--d", service_options.dimension, "Latent dimension")->check(CLI::Range(8, 4096));
    serve->add_option("--candidates", service_options.candidates, "Candidates per round")->check(CLI::Range(2, 16));
    serve->add_option("--resolution", service_options.resolution, "Rendered image size in pixels")
        ->check(CLI::Range(8, 1024));
    serve->add_option("--sigma1", service_options.acquisition.sigma1, "Content term weight");
    serve->add_option("--sigma2", service_options.acquisition.sigma2, "Prior penalty weight");
    serve->add_option("--restarts", service_options.acquisition.restarts, "Acquisition restarts")
        ->check(CLI::PositiveNumber);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        const int code = app.exit(e);
        return code == 0 ? 0 : kUsageError;
    }

    if (bench->parsed())
    {
        sss::BenchOptions options;
        try
        {
            options.function = sss::parse_function_kind(function_name);
            for (const auto& m : split(methods_text, ','))
            {
                options.methods.push_back(sss::MethodSpec::parse(m));
            }
            options.seeds = parse_seeds(seeds_text);
            sss::TestFunction::make(options.function, dimension);
        }
        catch (const std::exception& e)
        {
            std::cerr << "error: " << e.what() << "\n\n" << bench->help();
            return kUsageError;
        }
        options.dimension         = dimension;
        options.iterations        = iterations;
        options.oracle_resolution = resolution;
        options.output_prefix     = out_prefix;

        try
        {
            const auto output = sss::run_bench(options);
            for (const auto& m : output.methods)
            {
                std::cout << m.name << " mean final residual " << m.result.mean(iterations - 1) << '\n';
            }
            std::cout << "wrote " << output.trajectories.string() << " and " << output.summary.string() << '\n';
        }
        catch (const std::exception& e)
        {
            std::cerr << "error: " << e.what() << '\n';
            return kRuntimeError;
        }
        return 0;
    }

    try
    {
        sss::SessionService service(service_options);
        httplib::Server     server;
        sss::install_routes(server, service);
        if (!server.bind_to_port(host, port))
        {
            std::cerr << "error: cannot bind " << host << ':' << port << '\n';
            return kRuntimeError;
        }
        g_server = &server;
        std::signal(SIGINT, stop_server);
        std::signal(SIGTERM, stop_server);
        std::cout << "listening on http://" << host << ':' << port << std::endl;
        server.listen_after_bind();
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return kRuntimeError;
    }
    return 0;
}
