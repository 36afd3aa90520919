#include "lppn/cli.hpp"

#include <filesystem>
#include <optional>
#include <ostream>

#include <CLI11.hpp>

#include "lppn/coord.hpp"
#include "lppn/experiments.hpp"
#include "lppn/io.hpp"

namespace lppn {
namespace {

Json load_json(const std::string& path)
{
    std::string text;
    try {
        text = io::read_file(path);
    } catch (const std::exception& e) {
        throw ConfigError("--config", e.what());
    }
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ConfigError("--config", std::string("invalid JSON: ") + e.what());
    }
}

//! Leftover "--key value" or "--key=value" pairs become experiment params.
Json extras_to_params(const std::vector<std::string>& extras)
{
    Json params = Json::object();
    for (std::size_t k = 0; k < extras.size(); ++k) {
        std::string arg = extras[k];
        if (arg.rfind("--", 0) != 0 || arg.size() < 3) {
            throw ConfigError(arg, "expected --name value");
        }
        arg = arg.substr(2);
        std::string value;
        auto eq = arg.find('=');
        if (eq != std::string::npos) {
            value = arg.substr(eq + 1);
            arg = arg.substr(0, eq);
        } else {
            if (k + 1 >= extras.size()) {
                throw ConfigError(arg, "missing value");
            }
            value = extras[++k];
        }
        for (char& c : arg) {
            if (c == '-') {
                c = '_';
            }
        }
        Json parsed = Json::parse(value, nullptr, false);
        params[arg] = parsed.is_discarded() ? Json(value) : parsed;
    }
    return params;
}

struct CommonFlags {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;
    int threads = 0;
};

void add_common(CLI::App* sub, CommonFlags& f)
{
    sub->add_option("--config", f.config, "JSON file");
    sub->add_option("--seed", f.seed, "master seed (overrides the config)");
    sub->add_option("--out", f.out, "output directory (overrides the config)");
    sub->add_option("--threads", f.threads, "worker threads, 0 = all cores")->check(CLI::NonNegativeNumber);
}

}  // namespace

int cli_main(int argc, char** argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Noise sensitivity experiments for geometric last-passage percolation"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    CommonFlags run_flags;
    CLI::App* run = app.add_subcommand("run", "run every experiment listed in a config file");
    add_common(run, run_flags);
    run->get_option("--config")->required();

    std::map<std::string, CommonFlags> flags;
    std::map<std::string, CLI::App*> subs;
    for (const auto& [name, info] : experiment_registry()) {
        CLI::App* sub = app.add_subcommand(name, info.description);
        sub->allow_extras();
        add_common(sub, flags[name]);
        subs[name] = sub;
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitConfig;
    }

    try {
        RunConfig cfg;
        const CommonFlags* f = nullptr;
        if (run->parsed()) {
            f = &run_flags;
            cfg = parse_run_config(load_json(run_flags.config));
        } else {
            for (const auto& [name, sub] : subs) {
                if (!sub->parsed()) {
                    continue;
                }
                f = &flags[name];
                Json params = Json::object();
                if (!f->config.empty()) {
                    params = load_json(f->config);
                    if (!params.is_object()) {
                        throw ConfigError("--config", "expected a JSON object of parameters");
                    }
                }
                const Json extras = extras_to_params(sub->remaining());
                for (auto it = extras.begin(); it != extras.end(); ++it) {
                    params[it.key()] = it.value();
                }
                cfg.seed = 1;
                cfg.experiments.push_back(ExperimentSpec{name, params});
            }
        }
        if (f->seed) {
            cfg.seed = *f->seed;
        }
        if (!f->out.empty()) {
            cfg.output_dir = f->out;
        }
        int code = run_experiments(cfg, f->threads, err);
        out << (code == kExitOk ? "ok" : "assertion failures") << ": outputs in "
            << std::filesystem::path(cfg.output_dir).string() << "\n";
        return code;
    } catch (const ConfigError& e) {
        err << "configuration error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const DomainError& e) {
        err << "invalid parameters: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    }
}

}  // namespace lppn
