#include <chrono>
#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "symdyn/freegroup.hpp"
#include "symdyn/io.hpp"
#include "symdyn/zddim.hpp"

using namespace symdyn;

namespace {

// exit codes: 0 pass, 1 counterexample/violation, 2 unknown/budget,
// 3 search candidates logged, 64 malformed input
constexpr int kExitPass = 0;
constexpr int kExitWitness = 1;
constexpr int kExitUnknown = 2;
constexpr int kExitCandidates = 3;
constexpr int kExitParse = 64;

std::uint64_t env_budget(std::uint64_t fallback) {
    if (const char* s = std::getenv("SYMDYN_BUDGET")) return std::strtoull(s, nullptr, 10);
    return fallback;
}

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
            .count();
    }
};

void emit(ordered_json& report, const Timer& t) {
    report["timing_ms"] = t.ms();
    std::cout << report.dump(2) << std::endl;
}

int status_exit(CheckStatus s) {
    switch (s) {
        case CheckStatus::Proved: return kExitPass;
        case CheckStatus::Counterexample: return kExitWitness;
        case CheckStatus::Unknown: return kExitUnknown;
    }
    return kExitUnknown;
}

std::vector<std::vector<int>> read_points(const std::string& path, int d) {
    std::vector<std::vector<int>> pts;
    std::istringstream in(read_file(path));
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::vector<int> p;
        int v;
        while (ls >> v) p.push_back(v);
        if (static_cast<int>(p.size()) != d) throw parse_error("point arity mismatch: " + line);
        pts.push_back(p);
    }
    return pts;
}

std::string points_text(const std::vector<std::vector<int>>& pts) {
    std::ostringstream ss;
    for (const auto& p : pts) {
        for (std::size_t i = 0; i < p.size(); ++i) ss << (i ? " " : "") << p[i];
        ss << "\n";
    }
    return ss.str();
}

Torus parse_torus(const std::string& s) {
    Torus t;
    std::size_t start = 0;
    while (start < s.size()) {
        std::size_t x = s.find('x', start);
        t.dims.push_back(std::stoi(s.substr(start, x == std::string::npos ? std::string::npos
                                                                          : x - start)));
        if (x == std::string::npos) break;
        start = x + 1;
    }
    if (t.dims.empty()) throw parse_error("bad torus spec: " + s);
    return t;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"symbolic dynamics toolkit: SFTs, block maps, contraction homotopies"};
    app.require_subcommand(1);
    int jobs = 1;
    app.add_option("--jobs", jobs, "worker count")->capture_default_str();

    // ---- analyze ----
    auto* cmd_analyze = app.add_subcommand("analyze", "one-dimensional SFT report");
    std::string an_sft;
    int an_bound = 16;
    cmd_analyze->add_option("--sft", an_sft, "SFT file")->required();
    cmd_analyze->add_option("--period-bound", an_bound, "period set sample bound");

    // ---- homotopy-build ----
    auto* cmd_hbuild = app.add_subcommand("homotopy-build", "build a homotopy from a descriptor");
    std::string hb_spec, hb_out;
    cmd_hbuild->add_option("--spec", hb_spec, "homotopy descriptor file")->required();
    cmd_hbuild->add_option("--out", hb_out, "write the normalized descriptor here");

    // ---- homotopy-verify ----
    auto* cmd_hverify = app.add_subcommand("homotopy-verify", "verify a contraction homotopy");
    std::string hv_spec;
    int hv_margin = -1;
    bool hv_diagonal = false;
    cmd_hverify->add_option("--homotopy", hv_spec, "homotopy descriptor file")->required();
    cmd_hverify->add_option("--margin", hv_margin, "verification margin (default: window diameter)");
    cmd_hverify->add_flag("--diagonal", hv_diagonal, "also check the diagonal identity");

    // ---- retract-build ----
    auto* cmd_retract = app.add_subcommand("retract-build", "retraction of a full shift");
    std::string rb_homotopy;
    int rb_fixed = 0, rb_cap = 4;
    cmd_retract->add_option("--homotopy", rb_homotopy, "homotopy descriptor file")->required();
    cmd_retract->add_option("--fixed-point", rb_fixed, "fixed point symbol index")->required();
    cmd_retract->add_option("--cap", rb_cap, "validity-test radius cap");

    // ---- stitch ----
    auto* cmd_stitch = app.add_subcommand("stitch", "stitch partial morphisms");
    std::vector<std::string> st_maps;
    std::string st_homotopy;
    int st_cov = 1;
    cmd_stitch->add_option("--maps", st_maps, "partial morphism files")->required()->expected(-2);
    cmd_stitch->add_option("--homotopy", st_homotopy, "homotopy descriptor for the target")
        ->required();
    cmd_stitch->add_option("--coverage-radius", st_cov, "coverage check margin");

    // ---- factor-build ----
    auto* cmd_factor = app.add_subcommand("factor-build", "factor map onto a contractible SFT");
    std::string fa_f, fa_g, fa_homotopy, fa_x;
    cmd_factor->add_option("--f", fa_f, "block map into the target")->required();
    cmd_factor->add_option("--g", fa_g, "block map into the ambient full shift")->required();
    cmd_factor->add_option("--homotopy", fa_homotopy, "homotopy descriptor for the target")
        ->required();
    cmd_factor->add_option("--x", fa_x, "source SFT file (default: full shift over f's source)");

    // ---- fep-check ----
    auto* cmd_fep = app.add_subcommand("fep-check", "finite extension property sweep");
    std::string fe_sft;
    int fe_gap = 1, fe_radius = 5;
    cmd_fep->add_option("--sft", fe_sft, "SFT file or 'cocycle'")->required();
    cmd_fep->add_option("--gap", fe_gap, "gap ball radius");
    cmd_fep->add_option("--test-radius", fe_radius, "domain sweep radius");

    // ---- free-search ----
    auto* cmd_free = app.add_subcommand("free-search", "random free-group SFT search");
    int fs_k = 2, fs_alpha = 3, fs_rmax = 4, fs_degree = 4;
    std::uint64_t fs_count = 100, fs_seed = 1;
    std::string fs_density = "1/2";
    cmd_free->add_option("--k", fs_k, "free group rank");
    cmd_free->add_option("--alphabet", fs_alpha, "alphabet size");
    cmd_free->add_option("--density", fs_density, "pair density (decimal or a/b)");
    cmd_free->add_option("--count", fs_count, "number of instances");
    cmd_free->add_option("--rmax", fs_rmax, "strong irreducibility gap cap");
    cmd_free->add_option("--degree-bound", fs_degree, "periodic quotient degree cap");
    cmd_free->add_option("--seed", fs_seed, "seed");

    // ---- zd-coloring ----
    auto* cmd_zd = app.add_subcommand("zd-coloring", "periodic band coloring of the grid");
    int zd_d = 2, zd_r = 1, zd_n = 301;
    std::string zd_ppm, zd_svg;
    cmd_zd->add_option("--d", zd_d, "dimension");
    cmd_zd->add_option("--r", zd_r, "jump radius");
    cmd_zd->add_option("--N", zd_n, "period");
    cmd_zd->add_option("--out-ppm", zd_ppm, "write the fundamental domain as PPM");
    cmd_zd->add_option("--out-svg", zd_svg, "write the fundamental domain as SVG");

    // ---- net ----
    auto* cmd_net = app.add_subcommand("net", "packings, nets, partitions, merges");
    auto* net_complete = cmd_net->add_subcommand("complete", "greedy net completion");
    auto* net_partition = cmd_net->add_subcommand("partition", "corner-cone partition");
    auto* net_merge = cmd_net->add_subcommand("merge", "homotopy step on two nets");
    std::string nt_torus = "20x20", nt_points, nt_points_y, nt_time, nt_out;
    int nt_r = 3, nt_horizon = -1;
    for (auto* c : {net_complete, net_partition, net_merge}) {
        c->add_option("--torus", nt_torus, "torus dims, e.g. 100x100");
        c->add_option("--R", nt_r, "net parameter R");
    }
    net_complete->add_option("--points", nt_points, "seed packing file")->required();
    net_complete->add_option("--horizon", nt_horizon, "offset horizon (default: covering radius)");
    net_complete->add_option("--out", nt_out, "output point file");
    net_partition->add_option("--points", nt_points, "corner file")->required();
    net_merge->add_option("--x", nt_points, "first net file")->required();
    net_merge->add_option("--y", nt_points_y, "second net file")->required();
    net_merge->add_option("--time", nt_time, "binary time pattern file (row-major 0/1 text)")
        ->required();
    net_merge->add_option("--out", nt_out, "output point file");

    // ---- plot ----
    auto* cmd_plot = app.add_subcommand("plot", "batch image emitters");
    auto* plot_sweep = cmd_plot->add_subcommand("sweep", "line homotopy sweep raster");
    std::string pl_homotopy, pl_x, pl_y, pl_out = "sweep.ppm";
    int pl_steps = 32;
    plot_sweep->add_option("--homotopy", pl_homotopy, "homotopy descriptor")->required();
    plot_sweep->add_option("--x", pl_x, "first word, e.g. 010010")->required();
    plot_sweep->add_option("--y", pl_y, "second word")->required();
    plot_sweep->add_option("--steps", pl_steps, "sweep rows");
    plot_sweep->add_option("--out", pl_out, "output PPM");

    CLI11_PARSE(app, argc, argv);
    Timer timer;
    EngineOptions opt;
    opt.jobs = jobs;
    opt.budget = env_budget(opt.budget);

    try {
        if (*cmd_analyze) {
            Sft x = sft_from_json(ordered_json::parse(read_file(an_sft)));
            OneDimReport rep = analyze_1d(x, an_bound);
            ordered_json out = report_skeleton("analyze", {{"sft", an_sft},
                                                           {"period_bound", an_bound}});
            out["empty"] = rep.empty;
            out["transitive"] = rep.transitive;
            out["mixing"] = rep.mixing;
            out["gap"] = rep.gap;
            out["primitive_period"] = rep.period;
            out["period_set"] = rep.period_set;
            ordered_json blocks = ordered_json::array();
            for (const auto& b : rep.essential_blocks) blocks.push_back(b);
            out["essential_blocks"] = blocks;
            emit(out, timer);
            return kExitPass;
        }
        if (*cmd_hbuild) {
            HomotopyBundle b = homotopy_from_json(ordered_json::parse(read_file(hb_spec)));
            ordered_json desc = homotopy_to_json(b);
            if (!hb_out.empty()) write_file(hb_out, desc.dump(2) + "\n");
            ordered_json out = report_skeleton("homotopy-build", {{"spec", hb_spec}});
            out["builtin"] = b.name;
            out["descriptor"] = desc;
            emit(out, timer);
            return kExitPass;
        }
        if (*cmd_hverify) {
            HomotopyBundle b = homotopy_from_json(ordered_json::parse(read_file(hv_spec)));
            int margin = hv_margin >= 0 ? hv_margin : default_margin(b.homotopy.target);
            ContractionReport rep = verify_contraction(b.homotopy, margin, hv_diagonal, opt);
            ordered_json out = report_skeleton(
                "homotopy-verify",
                {{"homotopy", hv_spec}, {"margin", margin}, {"diagonal", hv_diagonal},
                 {"jobs", jobs}});
            out["report"] = contraction_report_to_json(rep, b.homotopy);
            emit(out, timer);
            return status_exit(rep.status);
        }
        if (*cmd_retract) {
            HomotopyBundle b = homotopy_from_json(ordered_json::parse(read_file(rb_homotopy)));
            RetractionResult r = build_retraction(b.space, b.homotopy, rb_fixed, rb_cap, opt);
            ordered_json out = report_skeleton(
                "retract-build",
                {{"homotopy", rb_homotopy}, {"fixed_point", rb_fixed}, {"cap", rb_cap}});
            out["found"] = r.found;
            out["radius"] = r.radius;
            out["identity"] = r.identity_ok;
            out["into"] = check_result_to_json(r.into, b.space.group, b.space.alphabet,
                                               b.space.alphabet);
            out["note"] = r.note;
            emit(out, timer);
            return r.found ? kExitPass : kExitUnknown;
        }
        if (*cmd_stitch) {
            HomotopyBundle b = homotopy_from_json(ordered_json::parse(read_file(st_homotopy)));
            std::vector<PartialMorphism> maps;
            for (const auto& path : st_maps)
                maps.push_back({blockmap_from_json(ordered_json::parse(read_file(path))),
                                b.space.alphabet.size()});
            SourceSpec src;
            src.group = maps[0].map.group;
            src.alphabet = maps[0].map.source;
            StitchResult r =
                stitch(maps, src, b.space, b.homotopy, ball(src.group, st_cov), opt);
            ordered_json out = report_skeleton("stitch", {{"maps", st_maps.size()},
                                                          {"homotopy", st_homotopy},
                                                          {"coverage_radius", st_cov}});
            out["coverage"] = check_result_to_json(r.coverage, src.group, src.alphabet,
                                                   r.map.target);
            out["into"] = check_result_to_json(r.into, src.group, src.alphabet, r.map.target);
            emit(out, timer);
            if (r.coverage.status == CheckStatus::Counterexample) return kExitWitness;
            return status_exit(r.into.status);
        }
        if (*cmd_factor) {
            HomotopyBundle b = homotopy_from_json(ordered_json::parse(read_file(fa_homotopy)));
            BlockMap f = blockmap_from_json(ordered_json::parse(read_file(fa_f)));
            BlockMap g = blockmap_from_json(ordered_json::parse(read_file(fa_g)));
            SourceSpec src;
            src.group = f.group;
            src.alphabet = f.source;
            if (!fa_x.empty()) {
                Sft x = sft_from_json(ordered_json::parse(read_file(fa_x)));
                src = SourceSpec::from_sft(x);
            }
            FactorResult r = factor_onto_contractible(f, g, src, b.space, b.homotopy, opt);
            ordered_json out = report_skeleton("factor-build", {{"f", fa_f},
                                                                {"g", fa_g},
                                                                {"homotopy", fa_homotopy}});
            out["f_into"] = check_result_to_json(r.f_into, src.group, src.alphabet,
                                                 b.space.alphabet);
            out["into"] = check_result_to_json(r.into, src.group, src.alphabet, b.space.alphabet);
            emit(out, timer);
            return status_exit(r.into.status);
        }
        if (*cmd_fep) {
            Sft x = fe_sft == "cocycle"
                        ? cocycle_sft().first
                        : sft_from_json(ordered_json::parse(read_file(fe_sft)));
            FepResult r = fep_check(x, fe_gap, fe_radius, env_budget(1ull << 22));
            ordered_json out = report_skeleton(
                "fep-check", {{"sft", fe_sft}, {"gap", fe_gap}, {"test_radius", fe_radius}});
            out["failed"] = r.failed;
            out["note"] = r.note;
            if (r.failed) {
                out["witness"]["extended"] = pattern_to_json(x.group, x.alphabet, *r.witness);
                ordered_json core = ordered_json::array();
                for (const Elem& e : r.core->cells()) core.push_back(x.group.show(e));
                out["witness"]["core"] = core;
                out["witness"]["core_invalid"] = r.witness_check.v == Verdict3::Invalid;
            } else {
                out["passed_up_to"] = r.reached_radius;
            }
            emit(out, timer);
            return r.failed ? kExitWitness : kExitPass;
        }
        if (*cmd_free) {
            double density;
            if (auto slash = fs_density.find('/'); slash != std::string::npos)
                density = std::stod(fs_density.substr(0, slash)) /
                          std::stod(fs_density.substr(slash + 1));
            else
                density = std::stod(fs_density);
            SearchReport r = search_counterexample(fs_k, fs_alpha, density, fs_count, fs_rmax,
                                                   fs_degree, fs_seed, jobs);
            ordered_json out = report_skeleton(
                "free-search",
                {{"k", fs_k}, {"alphabet", fs_alpha}, {"density", fs_density},
                 {"count", fs_count}, {"rmax", fs_rmax}, {"degree_bound", fs_degree},
                 {"seed", fs_seed}, {"jobs", jobs}});
            std::uint64_t nonempty = 0, si = 0, periodic = 0;
            ordered_json recs = ordered_json::array();
            for (const SearchRecord& rec : r.records) {
                nonempty += rec.nonempty;
                si += rec.si;
                periodic += rec.periodic_found;
                ordered_json rj;
                rj["index"] = rec.index;
                rj["nonempty"] = rec.nonempty;
                if (rec.nonempty) rj["si"] = rec.si;
                if (rec.si) {
                    rj["gap"] = rec.gap;
                    rj["periodic"] = rec.periodic_found;
                    if (rec.periodic_found) rj["degree"] = rec.degree;
                }
                recs.push_back(rj);
            }
            out["summary"] = {{"nonempty", nonempty}, {"si", si}, {"periodic", periodic},
                              {"candidates", r.candidates.size()}};
            out["candidates"] = r.candidates;
            if (fs_count <= 1000) out["records"] = recs;
            emit(out, timer);
            return r.candidates.empty() ? kExitPass : kExitCandidates;
        }
        if (*cmd_zd) {
            ZdColoring c = zd_coloring(zd_d, zd_r, zd_n);
            if (!zd_ppm.empty() && zd_d == 2) write_grid_coloring_ppm(zd_ppm, c.config);
            if (!zd_svg.empty() && zd_d == 2) write_grid_coloring_svg(zd_svg, c.config);
            DrmVerdict v = x_drm_check(c.config, zd_r, c.measured_m);
            ordered_json out = report_skeleton(
                "zd-coloring", {{"d", zd_d}, {"r", zd_r}, {"N", zd_n}});
            out["member"] = v.member;
            out["measured_m"] = c.measured_m;
            emit(out, timer);
            return v.member ? kExitPass : kExitWitness;
        }
        if (*cmd_net) {
            Torus t = parse_torus(nt_torus);
            if (*net_complete) {
                auto pts = read_points(nt_points, t.d());
                int horizon = nt_horizon >= 0 ? nt_horizon : covering_radius(t, pts);
                auto net = greedy_net_completion(t, nt_r, pts, horizon);
                if (!nt_out.empty()) write_file(nt_out, points_text(net));
                ordered_json out = report_skeleton(
                    "net complete",
                    {{"torus", nt_torus}, {"R", nt_r}, {"horizon", horizon}});
                out["seed_points"] = pts.size();
                out["net_points"] = net.size();
                out["packing"] = is_packing(t, nt_r, net);
                out["covering_radius"] = covering_radius(t, net);
                emit(out, timer);
                return kExitPass;
            }
            if (*net_partition) {
                auto pts = read_points(nt_points, t.d());
                NetPartition np = corner_partition(t, nt_r, pts);
                ordered_json out = report_skeleton(
                    "net partition", {{"torus", nt_torus}, {"R", nt_r}});
                out["cells"] = np.corners.size();
                out["all_connected"] = np.all_connected;
                out["max_cell_size"] = np.max_cell_size;
                out["cells_touching_unit_ball"] = np.max_cells_touching_ball;
                emit(out, timer);
                return np.all_connected ? kExitPass : kExitWitness;
            }
            if (*net_merge) {
                auto cx = read_points(nt_points, t.d());
                auto cy = read_points(nt_points_y, t.d());
                std::string bits = read_file(nt_time);
                std::vector<int> tb;
                for (char ch : bits)
                    if (ch == '0' || ch == '1') tb.push_back(ch - '0');
                auto merged = corner_merge(t, tb, cx, cy, nt_r);
                if (!nt_out.empty()) write_file(nt_out, points_text(merged));
                ordered_json out = report_skeleton(
                    "net merge", {{"torus", nt_torus}, {"R", nt_r}});
                out["points"] = merged.size();
                out["packing"] = is_packing(t, nt_r, merged);
                out["covering_radius"] = covering_radius(t, merged);
                emit(out, timer);
                return kExitPass;
            }
        }
        if (*cmd_plot) {
            if (*plot_sweep) {
                HomotopyBundle b = homotopy_from_json(ordered_json::parse(read_file(pl_homotopy)));
                auto parse_word = [&](const std::string& s) {
                    std::vector<int> w;
                    for (char ch : s) w.push_back(ch - '0');
                    return w;
                };
                write_line_sweep_ppm(pl_out, b.homotopy, parse_word(pl_x), parse_word(pl_y),
                                     pl_steps);
                ordered_json out = report_skeleton("plot sweep", {{"out", pl_out}});
                emit(out, timer);
                return kExitPass;
            }
        }
    } catch (const parse_error& e) {
        std::cerr << "parse error: " << e.what() << std::endl;
        return kExitParse;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "parse error: " << e.what() << std::endl;
        return kExitParse;
    } catch (const budget_error& e) {
        std::cerr << "budget: " << e.what() << std::endl;
        return kExitUnknown;
    } catch (const input_error& e) {
        std::cerr << "input error: " << e.what() << std::endl;
        return kExitParse;
    }
    return kExitPass;
}
