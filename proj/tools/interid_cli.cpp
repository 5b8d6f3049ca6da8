// Command-line front end: gallery generation, single-session simulation,
// benchmarks, supervision export, metrics aggregation, and the HTTP
// session service.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "interid/errors.hpp"
#include "interid/gallery_io.hpp"
#include "interid/metrics.hpp"
#include "interid/plugs.hpp"
#include "interid/policy.hpp"
#include "interid/service.hpp"
#include "interid/session.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct GalleryArgs {
    std::string gallery_path;
    std::string schema_path;
    std::string embeddings_path;
    bool synthesize = false;

    void attach(CLI::App* cmd, bool gallery_required) {
        auto* g = cmd->add_option("--gallery", gallery_path, "Gallery JSONL file");
        if (gallery_required) g->required();
        cmd->add_option("--schema", schema_path,
                        "Schema JSON file (default: <gallery>.schema.json next to the gallery)");
        cmd->add_option("--embeddings", embeddings_path,
                        "Embedding file (default: <gallery>.emb if present)");
        cmd->add_flag("--synthesize-embeddings", synthesize,
                      "Build one-hot embeddings from attrs when no embedding file exists");
    }

    interid::AttributeSchema load_schema_or_default() const {
        if (!schema_path.empty()) return interid::load_schema(schema_path);
        if (!gallery_path.empty()) {
            fs::path sibling = fs::path(gallery_path);
            sibling.replace_extension(".schema.json");
            if (fs::exists(sibling)) return interid::load_schema(sibling);
        }
        return interid::default_benchmark_schema();
    }

    interid::Gallery load() const {
        const interid::AttributeSchema schema = load_schema_or_default();
        std::optional<fs::path> emb;
        if (!embeddings_path.empty()) {
            emb = fs::path(embeddings_path);
        } else {
            fs::path sibling = fs::path(gallery_path);
            sibling.replace_extension(".emb");
            if (fs::exists(sibling)) emb = sibling;
        }
        if (emb) {
            fs::path path = *emb;
            return interid::load_gallery(schema, gallery_path, &path, false);
        }
        return interid::load_gallery(schema, gallery_path, nullptr, true);
    }
};

interid::SessionConfig load_base_config(const std::string& config_path) {
    if (config_path.empty()) return {};
    return interid::load_config(config_path);
}

interid::Gallery generate_for_bench(const interid::AttributeSchema& schema, int persons,
                                    const interid::SessionConfig& config) {
    return interid::generate_gallery(schema, static_cast<std::size_t>(persons),
                                     config.generator_params(),
                                     interid::derive_seed(config.seed, 0x67616cULL));
}

int cmd_gen_gallery(const std::string& schema_path, int count, std::uint64_t seed, double sigma,
                    int images, const std::string& out_prefix) {
    const interid::AttributeSchema schema = schema_path.empty()
                                                ? interid::default_benchmark_schema()
                                                : interid::load_schema(schema_path);
    interid::GeneratorParams params;
    params.noise_sigma = sigma;
    params.images_per_identity = images;
    const interid::Gallery gallery =
        interid::generate_gallery(schema, static_cast<std::size_t>(count), params, seed);

    const fs::path base(out_prefix);
    if (base.has_parent_path()) fs::create_directories(base.parent_path());
    interid::save_gallery(gallery, out_prefix + ".jsonl");
    interid::save_embeddings(gallery, out_prefix + ".emb");
    interid::save_schema(schema, out_prefix + ".schema.json");
    std::cout << "wrote " << gallery.size() << " persons to " << out_prefix << ".jsonl (dim "
              << gallery.dim << ")\n";
    return 0;
}

int cmd_simulate(const GalleryArgs& gallery_args, const std::string& config_path,
                 const std::string& target, std::uint64_t seed, const std::string& out_path) {
    const interid::Gallery gallery = gallery_args.load();
    interid::SessionConfig config = load_base_config(config_path);
    config.seed = seed;

    std::string target_id = target;
    if (target_id.empty()) {
        interid::Rng pick(interid::derive_seed(seed, 0x746172ULL));
        target_id = gallery.persons[pick.uniform_int(gallery.size())].id;
    }

    const interid::Plugs plugs = interid::make_plugs(config, gallery.schema);
    const interid::SessionTranscript transcript = interid::run_session(
        gallery, target_id, config, interid::derive_seed(seed, 0), "session-0", &plugs);

    if (out_path.empty()) {
        std::cout << transcript.to_jsonl();
    } else {
        std::ofstream out(out_path);
        out << transcript.to_jsonl();
        std::cout << "r0=" << transcript.r0 << " final_rank="
                  << (transcript.rounds.empty() ? transcript.r0 : transcript.rounds.back().rank)
                  << " rounds=" << transcript.rounds.size() << " -> " << out_path << "\n";
    }
    return 0;
}

int cmd_bench(const GalleryArgs& gallery_args, const std::string& config_path, int persons,
              int sessions, const std::string& policy, const std::string& selector,
              const std::string& scorer, int rounds, std::uint64_t seed,
              const std::string& out_dir, bool save_gallery_too) {
    interid::SessionConfig config = load_base_config(config_path);
    config.seed = seed;
    if (!policy.empty()) config.policy = policy;
    if (!selector.empty()) config.selector = selector;
    if (!scorer.empty()) config.scorer = scorer;
    if (rounds > 0) config.max_rounds = rounds;
    config.validate();

    interid::Gallery gallery;
    if (!gallery_args.gallery_path.empty()) {
        gallery = gallery_args.load();
    } else {
        gallery = generate_for_bench(gallery_args.load_schema_or_default(), persons, config);
    }

    const interid::Plugs plugs = interid::make_plugs(config, gallery.schema);
    const fs::path out(out_dir);
    const interid::BenchmarkResult result =
        interid::run_benchmark(gallery, sessions, config, out, &plugs);
    if (save_gallery_too) {
        interid::save_gallery(gallery, out / "gallery.jsonl");
        interid::save_embeddings(gallery, out / "gallery.emb");
        interid::save_schema(gallery.schema, out / "gallery.schema.json");
    }
    std::cout << result.report.dump(2) << "\n";
    return 0;
}

int cmd_export_supervision(const GalleryArgs& gallery_args, const std::string& config_path,
                           int persons, int sessions, int rounds, std::uint64_t seed,
                           const std::string& out_file) {
    interid::SessionConfig config = load_base_config(config_path);
    config.seed = seed;
    config.policy = "lookahead";
    if (rounds > 0) config.max_rounds = rounds;
    config.validate();

    interid::Gallery gallery;
    if (!gallery_args.gallery_path.empty()) {
        gallery = gallery_args.load();
    } else {
        gallery = generate_for_bench(gallery_args.load_schema_or_default(), persons, config);
    }

    const interid::BenchmarkResult result = interid::run_benchmark(gallery, sessions, config);
    const fs::path path(out_file);
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream(path).close();  // truncate, then append per session
    std::size_t examples = 0;
    for (const interid::SessionTranscript& t : result.transcripts) {
        const auto batch = interid::export_supervision(t);
        interid::write_supervision(batch, path, true);
        examples += batch.size();
    }
    std::cout << "wrote " << examples << " supervision examples to " << out_file << "\n";
    return 0;
}

int cmd_metrics(const std::string& transcripts_dir, const std::string& out_path) {
    const auto transcripts = interid::read_transcripts_dir(transcripts_dir);
    if (transcripts.empty()) {
        std::cerr << "no transcripts under " << transcripts_dir << "\n";
        return 1;
    }
    const json report = interid::metrics_report(transcripts);
    if (out_path.empty()) {
        std::cout << report.dump(2) << "\n";
    } else {
        std::ofstream out(out_path);
        out << report.dump(2) << '\n';
    }
    return 0;
}

int cmd_serve(const GalleryArgs& gallery_args, const std::string& config_path,
              const std::string& bind, double idle_timeout) {
    const interid::Gallery gallery = gallery_args.load();
    const interid::SessionConfig config = load_base_config(config_path);
    auto [host, port] = interid::parse_bind_address(bind);
    interid::SessionService service(gallery, config, idle_timeout);
    std::cout << "serving " << gallery.size() << " persons on " << host << ":" << port << "\n";
    if (!service.listen(host, port)) {
        std::cerr << "failed to bind " << bind << "\n";
        return 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Interactive person re-identification engine"};
    app.require_subcommand(1);

    // gen-gallery
    auto* gen = app.add_subcommand("gen-gallery", "Generate a synthetic gallery");
    std::string gen_schema, gen_out = "gallery/gallery";
    int gen_count = 1000, gen_images = 1;
    std::uint64_t gen_seed = 42;
    double gen_sigma = 0.05;
    gen->add_option("--schema", gen_schema, "Schema JSON (default: built-in benchmark schema)");
    gen->add_option("--count", gen_count, "Number of identities");
    gen->add_option("--seed", gen_seed, "Generator seed");
    gen->add_option("--sigma", gen_sigma, "Embedding noise sigma");
    gen->add_option("--images-per-identity", gen_images, "Noisy embedding variants per identity");
    gen->add_option("--out", gen_out, "Output prefix (.jsonl/.emb/.schema.json)");

    // simulate
    auto* sim = app.add_subcommand("simulate", "Run one session against the built-in witness");
    GalleryArgs sim_gallery;
    sim_gallery.attach(sim, true);
    std::string sim_config, sim_target, sim_out;
    std::uint64_t sim_seed = 42;
    sim->add_option("--config", sim_config, "Session config JSON");
    sim->add_option("--target", sim_target, "Target person id (default: sampled)");
    sim->add_option("--seed", sim_seed, "Session seed");
    sim->add_option("--out", sim_out, "Transcript output file (default: stdout)");

    // bench
    auto* bench = app.add_subcommand("bench", "Run a benchmark and write transcripts + metrics");
    GalleryArgs bench_gallery;
    bench_gallery.attach(bench, false);
    std::string bench_config, bench_policy, bench_selector, bench_scorer, bench_out = "bench-out";
    int bench_persons = 1000, bench_sessions = 200, bench_rounds = 0;
    std::uint64_t bench_seed = 42;
    bool bench_save_gallery = false;
    bench->add_option("--config", bench_config, "Session config JSON");
    bench->add_option("--persons", bench_persons, "Identities to generate when no gallery given");
    bench->add_option("--sessions", bench_sessions, "Number of sessions")->required();
    bench->add_option("--policy", bench_policy, "lookahead | entropy | random");
    bench->add_option("--selector", bench_selector, "gumbel | topk | kmeans | uniform");
    bench->add_option("--scorer", bench_scorer, "similarity | diversity | external");
    bench->add_option("--rounds", bench_rounds, "Max interaction rounds (default 5)");
    bench->add_option("--seed", bench_seed, "Benchmark seed");
    bench->add_option("--out", bench_out, "Output directory")->required();
    bench->add_flag("--save-gallery", bench_save_gallery, "Also write the gallery files");

    // export-supervision
    auto* sup = app.add_subcommand("export-supervision",
                                   "Run lookahead sessions and export training pairs");
    GalleryArgs sup_gallery;
    sup_gallery.attach(sup, false);
    std::string sup_config, sup_out = "supervision.jsonl";
    int sup_persons = 1000, sup_sessions = 100, sup_rounds = 0;
    std::uint64_t sup_seed = 42;
    sup->add_option("--config", sup_config, "Session config JSON");
    sup->add_option("--persons", sup_persons, "Identities to generate when no gallery given");
    sup->add_option("--sessions", sup_sessions, "Number of sessions");
    sup->add_option("--rounds", sup_rounds, "Rounds per session (default 5)");
    sup->add_option("--seed", sup_seed, "Seed");
    sup->add_option("--out", sup_out, "Output JSONL file")->required();

    // metrics
    auto* met = app.add_subcommand("metrics", "Aggregate metrics from transcript files");
    std::string met_dir, met_out;
    met->add_option("--transcripts", met_dir, "Directory of transcript .jsonl files")->required();
    met->add_option("--out", met_out, "Report output file (default: stdout)");

    // serve
    auto* srv = app.add_subcommand("serve", "Run the HTTP session service");
    GalleryArgs srv_gallery;
    srv_gallery.attach(srv, true);
    std::string srv_config, srv_bind = "127.0.0.1:8080";
    double srv_idle = 600.0;
    srv->add_option("--config", srv_config, "Session config JSON");
    srv->add_option("--bind", srv_bind, "host:port to listen on");
    srv->add_option("--idle-timeout", srv_idle, "Seconds before idle sessions are dropped");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed())
            return cmd_gen_gallery(gen_schema, gen_count, gen_seed, gen_sigma, gen_images, gen_out);
        if (sim->parsed())
            return cmd_simulate(sim_gallery, sim_config, sim_target, sim_seed, sim_out);
        if (bench->parsed())
            return cmd_bench(bench_gallery, bench_config, bench_persons, bench_sessions,
                             bench_policy, bench_selector, bench_scorer, bench_rounds, bench_seed,
                             bench_out, bench_save_gallery);
        if (sup->parsed())
            return cmd_export_supervision(sup_gallery, sup_config, sup_persons, sup_sessions,
                                          sup_rounds, sup_seed, sup_out);
        if (met->parsed()) return cmd_metrics(met_dir, met_out);
        if (srv->parsed()) return cmd_serve(srv_gallery, srv_config, srv_bind, srv_idle);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
