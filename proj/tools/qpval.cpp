#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "qpval/cli.hpp"

namespace {

using namespace qpval;
using namespace qpval::cli;

std::optional<Format> parse_format(const std::string& name)
{
    if (name == "json") return Format::json;
    if (name == "csv") return Format::csv;
    return std::nullopt;
}

// Loads the config and resolves the seed; both can fail with a usage error.
int with_config(const std::string& path, std::optional<std::uint64_t> cli_seed,
                const std::function<int(const Json&, mc::RngSpec)>& body)
{
    return guarded(
        [&] {
            const Json cfg = load_config(path);
            if (!cfg.is_object()) throw InputError("config must be a JSON object");
            return body(cfg, resolve_rng(cli_seed, cfg, std::getenv("QPVAL_SEED")));
        },
        std::cerr);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"qpval: QP-rule valuation, affine closed forms, Monte Carlo and insurance arbitrage checks"};
    app.require_subcommand(1);

    std::string example, s_text, config, output, format_name = "json";
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> n_override;

    auto* reproduce = app.add_subcommand("reproduce", "recompute a built-in three-state example exactly");
    reproduce->add_option("id", example, "discrete-complete or discrete-incomplete")->required();
    reproduce->add_option("--s", s_text, "mass of the first public state under Q, e.g. 1/4 (incomplete example)");

    auto* price = app.add_subcommand("price", "value a product from a config");
    price->add_option("-c,--config", config)->required();
    price->add_option("-o,--output", output, "write the report here instead of stdout");
    price->add_option("--format", format_name, "json or csv");
    price->add_option("--seed", seed);

    auto* check = app.add_subcommand("check", "insurance arbitrage verdict for a finite market");
    check->add_option("-c,--config", config)->required();
    check->add_option("--seed", seed);

    auto* validate = app.add_subcommand("validate", "closed forms against Monte Carlo on shared paths");
    validate->add_option("-c,--config", config)->required();
    validate->add_option("--n", n_override, "number of outer paths");
    validate->add_option("--seed", seed);
    validate->add_option("--format", format_name, "json or csv");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : exit_usage;
    }

    const auto format = parse_format(format_name);
    if (!format) {
        std::cerr << "--format must be json or csv\n";
        return exit_usage;
    }

    if (reproduce->parsed()) {
        std::optional<Rational> s;
        if (!s_text.empty()) {
            try {
                s = parse_rational(s_text);
            } catch (const Error& e) {
                std::cerr << "--s: " << e.what() << '\n';
                return exit_usage;
            }
        }
        return cmd_reproduce(example, s, std::cout, std::cerr);
    }
    if (price->parsed()) {
        return with_config(config, seed, [&](const Json& cfg, mc::RngSpec rng) {
            if (output.empty()) return cmd_price(cfg, *format, rng, std::cout, std::cerr);
            std::ostringstream report;
            const int rc = cmd_price(cfg, *format, rng, report, std::cerr);
            if (rc != exit_ok) return rc;
            std::ofstream file(output);
            if (!file) throw InputError("cannot write '" + output + "'");
            file << report.str();
            return rc;
        });
    }
    if (check->parsed())
        return with_config(config, seed, [&](const Json& cfg, mc::RngSpec rng) { return cmd_check(cfg, rng, std::cout, std::cerr); });
    return with_config(config, seed, [&](const Json& cfg, mc::RngSpec rng) {
        return cmd_validate(cfg, n_override, *format, rng, std::cout, std::cerr);
    });
}
