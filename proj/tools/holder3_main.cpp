// holder3: analyzes a polynomial model domain in C^3 against a contact curve
// and certifies the Holder-regularity obstruction epsilon <= 1/eta.
//
// Subcommands: analyze | normalize | diagram | slice | verify
// Exit codes: 0 all verdicts pass, 1 usage or parse error, 2 verdict failure.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "holder3/holder3.hpp"

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw holder3::Error("cannot open file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

struct CommonArgs {
    std::string domain_file;
    std::string curve_file;
    int eta = 0;
    std::string deltas;
    long samples = -1;
    long seed = -1;
    std::string out;
    std::string config;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--domain", args.domain_file, "defining function file (.poly)")
        ->required();
    cmd->add_option("--curve", args.curve_file, "contact curve file (.curve)")->required();
    cmd->add_option("--eta", args.eta, "contact order eta")->required();
    cmd->add_option("--deltas", args.deltas, "sweep spec start:end:count or list");
    cmd->add_option("--samples", args.samples, "Halton samples per geometry check");
    cmd->add_option("--seed", args.seed, "Halton offset seed");
    cmd->add_option("--out", args.out, "write the JSON output to this file");
    cmd->add_option("--config", args.config, "key = value config file");
}

holder3::DomainSpec make_spec(const CommonArgs& args) {
    holder3::Options opt;
    if (!args.config.empty()) opt.load_file(args.config);
    if (!args.deltas.empty()) opt.deltas = args.deltas;
    if (args.samples >= 0) opt.samples = args.samples;
    if (args.seed >= 0) opt.seed = args.seed;
    return holder3::DomainSpec::parse(slurp(args.domain_file), slurp(args.curve_file),
                                      args.eta, opt);
}

void emit(const std::string& text, const std::string& out) {
    if (out.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(out);
        if (!f) throw holder3::Error("cannot write: " + out);
        f << text;
    }
}

int run_full(const CommonArgs& args, bool verdict_lines) {
    auto spec = make_spec(args);
    auto rep = holder3::run_analysis(spec);
    emit(holder3::report_to_string(rep), args.out);
    if (verdict_lines) {
        const auto& roll = rep.json["verdict_rollup"];
        for (const auto& f : roll["failures"])
            std::cerr << "[FAIL] " << f.get<std::string>() << "\n";
        std::cerr << (rep.all_pass ? "all verdicts pass" : "verdict failure") << "\n";
    }
    return rep.all_pass ? 0 : 2;
}

int run_normalize(const CommonArgs& args) {
    auto spec = make_spec(args);
    auto cr = holder3::certify_special_coordinates(spec.R, spec.gamma, spec.eta);
    holder3::Json j;
    if (std::holds_alternative<holder3::TypeBoundBranch>(cr)) {
        const auto& br = std::get<holder3::TypeBoundBranch>(cr);
        j["branch"] = "type_bound";
        j["reason"] = br.reason;
        j["normalized_r"] = br.normalized.str();
    } else {
        const auto& sc = std::get<holder3::SpecialCoordinates>(cr);
        j["branch"] = "full";
        j["m"] = sc.m;
        j["h"] = holder3::detail::json_crat(sc.h);
        j["r"] = sc.r.str();
        j["shape_ok"] = sc.cert.shape_ok;
        j["contact_ok"] = sc.cert.contact_ok;
        j["witness_ok"] = sc.cert.witness_ok;
    }
    emit(j.dump(2) + "\n", args.out);
    return 0;
}

int run_diagram(const CommonArgs& args) {
    auto spec = make_spec(args);
    auto cr = holder3::certify_special_coordinates(spec.R, spec.gamma, spec.eta);
    if (std::holds_alternative<holder3::TypeBoundBranch>(cr)) {
        emit("{\"branch\": \"type_bound\"}\n", args.out);
        return 0;
    }
    const auto& sc = std::get<holder3::SpecialCoordinates>(cr);
    auto dg = holder3::build_diagram(sc.r, sc.m, sc.eta);
    holder3::Json j;
    holder3::Json verts = holder3::Json::array();
    for (auto& [p, q] : dg.vertices) verts.push_back(holder3::Json::array({p, q}));
    j["vertices"] = verts;
    holder3::Json ws = holder3::Json::array();
    for (auto& w : dg.weights)
        ws.push_back(holder3::Json{{"eta_nu", w.eta_nu.get_str()},
                                   {"lambda_nu", w.lambda_nu.get_str()}});
    j["weights"] = ws;
    holder3::Json ts = holder3::Json::array();
    for (auto& t : dg.t_of) ts.push_back(t.get_str());
    j["t_table"] = ts;
    emit(j.dump(2) + "\n", args.out);
    return 0;
}

int run_slice(const CommonArgs& args) {
    auto spec = make_spec(args);
    auto cr = holder3::certify_special_coordinates(spec.R, spec.gamma, spec.eta);
    if (std::holds_alternative<holder3::TypeBoundBranch>(cr)) {
        emit("{\"branch\": \"type_bound\"}\n", args.out);
        return 0;
    }
    const auto& sc = std::get<holder3::SpecialCoordinates>(cr);
    auto dg = holder3::build_diagram(sc.r, sc.m, sc.eta);
    auto decomp = holder3::decompose(sc.r, dg);
    auto dir = holder3::choose_direction(decomp, spec.options.theta_samples);
    auto deltas = spec.options.delta_sweep();
    auto sweep = holder3::compute_slice_sweep(sc.r, dir, deltas, sc.eta, sc.m);
    auto rows = holder3::verify_r_derivative_scaling(sc.r, dg, dir, deltas, spec.options);
    auto rho = holder3::verify_rho_derivative_scaling(sweep, dg, spec.options);
    holder3::Json j;
    holder3::Json rj = holder3::Json::array();
    bool all = true;
    for (auto& row : rows) {
        rj.push_back(holder3::detail::json_fit_row(row));
        all = all && row.pass;
    }
    j["r_derivative_fits"] = rj;
    holder3::Json pj = holder3::Json::array();
    for (auto& row : rho.rows) {
        pj.push_back(holder3::detail::json_fit_row(row));
        all = all && row.pass;
    }
    j["rho_derivative_fits"] = pj;
    j["tau_monotone"] = rho.tau_monotone;
    emit(j.dump(2) + "\n", args.out);
    return all ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pseudoconvex model-domain analyzer: special coordinates, Newton "
                 "diagram, slice scaling, and the Holder bound 1/eta"};
    app.require_subcommand(1);

    CommonArgs args;
    auto* analyze = app.add_subcommand("analyze", "full pipeline with JSON report");
    add_common(analyze, args);
    auto* normalize = app.add_subcommand("normalize", "special coordinates only");
    add_common(normalize, args);
    auto* diagram = app.add_subcommand("diagram", "Newton diagram and weights");
    add_common(diagram, args);
    auto* slice = app.add_subcommand("slice", "slice normalizations and scaling fits");
    add_common(slice, args);
    auto* verify =
        app.add_subcommand("verify", "full pipeline, verdict lines on stderr");
    add_common(verify, args);

    try {
        app.parse(argc, argv);
        if (analyze->parsed()) return run_full(args, false);
        if (normalize->parsed()) return run_normalize(args);
        if (diagram->parsed()) return run_diagram(args);
        if (slice->parsed()) return run_slice(args);
        if (verify->parsed()) return run_full(args, true);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const holder3::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
