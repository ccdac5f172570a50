// Command-line front end: box construction, protocol application, the
// two-copy wiring sweep, iterated distillation schemes, region scans, and
// the boundary curves, with a reproducibility manifest on every run.
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nld/box.hpp"
#include "nld/distill.hpp"
#include "nld/optimize.hpp"
#include "nld/protocol.hpp"
#include "nld/scan.hpp"
#include "nld/wiring.hpp"

using nlohmann::ordered_json;

namespace {

constexpr const char* VERSION = "1.0.0";

ordered_json make_manifest(const std::string& command, ordered_json params) {
    return ordered_json{{"command", command},
                        {"parameters", std::move(params)},
                        {"tolerances",
                         {{"eps_prob", nld::EPS_PROB},
                          {"eps_lp", nld::EPS_LP},
                          {"distill_tol", nld::DISTILL_TOL},
                          {"renorm_drift", nld::RENORM_DRIFT}}},
                        {"version", VERSION}};
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    f << text;
    if (!f) throw std::runtime_error("write to " + path + " failed");
}

// Primary output to stdout (manifest embedded) or to --out, in which case
// the manifest lands next to it unless --manifest picked a spot.
void emit_json(ordered_json j, const std::string& out, const std::string& manifest_path,
               const ordered_json& manifest) {
    if (out.empty()) {
        j["manifest"] = manifest;
        std::cout << j.dump(2) << '\n';
        if (!manifest_path.empty()) write_file(manifest_path, manifest.dump(2) + "\n");
        return;
    }
    write_file(out, j.dump(2) + "\n");
    const std::string mp = manifest_path.empty() ? out + ".manifest.json" : manifest_path;
    write_file(mp, manifest.dump(2) + "\n");
}

// Shared box-source flags: exactly one of an extremal index, a parameterized
// cross-section point, or a box file.
struct BoxSource {
    std::string cs;
    double eta = std::nan(""), omega = std::nan("");
    int local = 0, nonlocal = 0;
    std::string file;

    void add_options(CLI::App* cmd) {
        cmd->add_option("--cs", cs, "cross-section I, II, or III (needs --eta/--omega)");
        cmd->add_option("--eta", eta, "local weight of the cross-section point");
        cmd->add_option("--omega", omega, "PR weight of the cross-section point");
        cmd->add_option("--local", local, "local deterministic box index 1..16");
        cmd->add_option("--nonlocal", nonlocal, "nonlocal vertex index 1..8");
        cmd->add_option("--file", file, "box JSON file");
    }

    nld::Box resolve(bool must_be_valid = true) const {
        int sources = !cs.empty();
        sources += local != 0;
        sources += nonlocal != 0;
        sources += !file.empty();
        if (sources != 1)
            throw std::invalid_argument(
                "pick exactly one box source: --cs/--eta/--omega, --local, "
                "--nonlocal, or --file");
        if (!cs.empty()) {
            if (std::isnan(eta) || std::isnan(omega))
                throw std::invalid_argument("--cs needs both --eta and --omega");
            return nld::cs_point(nld::parse_cross_section(cs), eta, omega);
        }
        if (local != 0) {
            auto [mu, nu, sigma, tau] = nld::local_decode(local);
            return nld::local_extremal(mu, nu, sigma, tau);
        }
        if (nonlocal != 0) {
            auto [mu, nu, sigma] = nld::nonlocal_decode(nonlocal);
            return nld::nonlocal_extremal(mu, nu, sigma);
        }
        std::ifstream f(file);
        if (!f) throw std::invalid_argument("cannot read box file " + file);
        std::stringstream ss;
        ss << f.rdbuf();
        nld::Box b = nld::box_from_json(ss.str());
        if (must_be_valid && !nld::validate(b).ok())
            throw std::invalid_argument(file + " is not a valid no-signalling box");
        return b;
    }

    ordered_json params() const {
        ordered_json p;
        if (!cs.empty()) {
            p["cs"] = cs;
            p["eta"] = eta;
            p["omega"] = omega;
        }
        if (local != 0) p["local"] = local;
        if (nonlocal != 0) p["nonlocal"] = nonlocal;
        if (!file.empty()) p["file"] = file;
        return p;
    }
};

ordered_json box_json(const nld::Box& b) { return ordered_json::parse(nld::box_to_json(b)); }

ordered_json labels_json(const std::array<int, 2>& labels, bool vertex) {
    if (!vertex) return "LP";
    return ordered_json{labels[0], labels[1]};
}

void show_two_copy(const std::string& name) {
    nld::NamedTwoCopy t = nld::named_two_copy(name);
    std::cout << name << " (2 copies per round)\n";
    const char* party[2] = {"alice", "bob"};
    for (int z = 0; z < 2; ++z) {
        nld::WiringPair lp = z ? t.bob : t.alice;
        std::cout << "  " << party[z] << " labels: " << lp[0] << " " << lp[1] << "  ("
                  << nld::wiring_class_name(nld::wiring_class(lp[0])) << ", "
                  << nld::wiring_class_name(nld::wiring_class(lp[1])) << ")\n";
    }
}

void show_three_copy(const std::string& name) {
    const nld::NamedProtocol& p = nld::named_protocol(name);
    std::cout << name << " (3 copies per round)\n";
    const char* party[2] = {"alice", "bob"};
    for (int side = 0; side < 2; ++side) {
        const nld::NCopyWiring& w = side ? p.bob : p.alice;
        std::cout << "  " << party[side] << ":\n";
        for (int z = 0; z < 2; ++z) {
            std::cout << "    input " << z << ":";
            for (int k = 0; k < w.n; ++k) {
                std::cout << "  step" << k << " box/in";
                for (int h = 0; h < (1 << k); ++h)
                    std::cout << " " << int(w.box_choice[z][k][h]) << "/"
                              << int(w.input_choice[z][k][h]);
            }
            std::cout << "  out";
            for (int h = 0; h < (1 << w.n); ++h) std::cout << " " << int(w.output[z][h]);
            std::cout << '\n';
        }
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"nonlocality distillation toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", VERSION);

    try {
        // ---- box ----------------------------------------------------------
        auto* box_cmd = app.add_subcommand("box", "construct, validate, and score a box");
        BoxSource box_src;
        box_src.add_options(box_cmd);
        std::string box_out, box_manifest;
        box_cmd->add_option("--out", box_out, "write the result JSON to this file");
        box_cmd->add_option("--manifest", box_manifest, "manifest file path");
        box_cmd->callback([&] {
            nld::Box b = box_src.resolve(false);
            nld::ValidationReport v = nld::validate(b);
            ordered_json j;
            j["box"] = box_json(b);
            j["chsh"] = nld::chsh(b);
            j["chsh2"] = nld::chsh2(b);
            j["validation"] = {{"ok", v.ok()},
                               {"positivity", v.positivity},
                               {"normalization", v.normalization},
                               {"no_signalling_alice", v.no_signalling_alice},
                               {"no_signalling_bob", v.no_signalling_bob},
                               {"worst", v.worst}};
            emit_json(j, box_out, box_manifest, make_manifest("box", box_src.params()));
        });

        // ---- protocols ----------------------------------------------------
        auto* proto_cmd = app.add_subcommand("protocols", "list the named protocols");
        std::string show_name;
        proto_cmd->add_option("--show", show_name, "print one protocol's wiring tables");
        proto_cmd->callback([&] {
            if (!show_name.empty()) {
                if (nld::protocol_arity(show_name) == 2)
                    show_two_copy(show_name);
                else
                    show_three_copy(show_name);
                return;
            }
            for (const std::string& n : nld::protocol_names())
                std::cout << n << "  (" << nld::protocol_arity(n) << " copies per round)\n";
        });

        // ---- apply --------------------------------------------------------
        auto* apply_cmd = app.add_subcommand("apply", "apply a named protocol once");
        BoxSource apply_src;
        apply_src.add_options(apply_cmd);
        std::string apply_name, apply_out, apply_manifest;
        apply_cmd->add_option("--name", apply_name, "protocol name")->required();
        apply_cmd->add_option("--out", apply_out, "write the result JSON to this file");
        apply_cmd->add_option("--manifest", apply_manifest, "manifest file path");
        apply_cmd->callback([&] {
            nld::protocol_arity(apply_name);  // reject unknown names early
            nld::Box before = apply_src.resolve();
            nld::Box after = nld::apply_named(before, apply_name);
            ordered_json j;
            j["protocol"] = apply_name;
            j["chsh_before"] = nld::chsh(before);
            j["chsh_after"] = nld::chsh(after);
            j["gain"] = nld::chsh(after) - nld::chsh(before);
            j["box"] = box_json(after);
            ordered_json params = apply_src.params();
            params["name"] = apply_name;
            emit_json(j, apply_out, apply_manifest, make_manifest("apply", params));
        });

        // ---- optimize2 ----------------------------------------------------
        auto* opt_cmd =
            app.add_subcommand("optimize2", "sweep all two-copy wirings of a box pair");
        BoxSource opt_src;
        opt_src.add_options(opt_cmd);
        std::string opt_box1, opt_box2, opt_perbob, opt_out, opt_manifest;
        int opt_threads = 0;
        opt_cmd->add_option("--box1", opt_box1, "first box JSON file (with --box2)");
        opt_cmd->add_option("--box2", opt_box2, "second box JSON file");
        opt_cmd->add_option("--per-bob", opt_perbob, "write the 82x82 value table as CSV");
        opt_cmd->add_option("--threads", opt_threads, "worker threads (0 = all cores)");
        opt_cmd->add_option("--out", opt_out, "write the result JSON to this file");
        opt_cmd->add_option("--manifest", opt_manifest, "manifest file path");
        opt_cmd->callback([&] {
            if (opt_box1.empty() != opt_box2.empty())
                throw std::invalid_argument("--box1 and --box2 go together");
            nld::Box q1, q2;
            ordered_json params;
            if (!opt_box1.empty()) {
                BoxSource s1, s2;
                s1.file = opt_box1;
                s2.file = opt_box2;
                q1 = s1.resolve();
                q2 = s2.resolve();
                params["box1"] = opt_box1;
                params["box2"] = opt_box2;
            } else {
                q1 = q2 = opt_src.resolve();
                params = opt_src.params();
            }
            params["threads"] = opt_threads;
            nld::SweepResult r =
                nld::sweep_two_copy(q1, q2, opt_threads, !opt_perbob.empty());
            if (!r.vertex_alice)
                std::cerr << "warning: optimum off every catalog vertex, reporting LP\n";
            ordered_json j;
            j["value"] = r.value;
            j["alice"] = labels_json(r.alice, r.vertex_alice);
            j["bob"] = ordered_json{r.bob[0], r.bob[1]};
            j["vertex"] = r.vertex_alice;
            j["chsh_inputs"] = {nld::chsh(q1), nld::chsh(q2)};
            if (!opt_perbob.empty()) {
                std::ostringstream csv;
                csv << "bob_l0,bob_l1,value\n";
                char buf[64];
                for (int m0 = 0; m0 < nld::CATALOG_SIZE; ++m0)
                    for (int m1 = 0; m1 < nld::CATALOG_SIZE; ++m1) {
                        std::snprintf(buf, sizeof buf, "%.12g",
                                      r.per_bob[m0 * nld::CATALOG_SIZE + m1]);
                        csv << (m0 + 1) << ',' << (m1 + 1) << ',' << buf << '\n';
                    }
                write_file(opt_perbob, csv.str());
                params["per_bob"] = opt_perbob;
            }
            emit_json(j, opt_out, opt_manifest, make_manifest("optimize2", params));
        });

        // ---- serial / parallel / repeat ------------------------------------
        struct DistillCmd {
            BoxSource src;
            int rounds = 50;
            double tol = 1e-9;
            bool stop_at_threshold = false, certify = false;
            int threads = 0;
            std::string protocol, out, manifest;
        };
        DistillCmd dc[3];
        const char* dc_names[3] = {"serial", "parallel", "repeat"};
        const char* dc_help[3] = {
            "greedy sweep-composition with one fresh copy per round",
            "greedy sweep-composition of the current box with itself",
            "one named protocol applied blindly every round"};
        for (int i = 0; i < 3; ++i) {
            auto* cmd = app.add_subcommand(dc_names[i], dc_help[i]);
            DistillCmd& d = dc[i];
            d.src.add_options(cmd);
            cmd->add_option("--rounds", d.rounds, "round cap");
            cmd->add_option("--tol", d.tol, "minimum CHSH improvement per round");
            cmd->add_flag("--stop-at-threshold", d.stop_at_threshold,
                          "halt once CHSH exceeds the collapse threshold");
            cmd->add_flag("--certify", d.certify,
                          "report whether the scheme certifies trivial "
                          "communication complexity");
            cmd->add_option("--threads", d.threads, "worker threads (0 = all cores)");
            if (i == 2)
                cmd->add_option("--protocol", d.protocol, "protocol to repeat")->required();
            cmd->add_option("--out", d.out, "write the transcript JSON to this file");
            cmd->add_option("--manifest", d.manifest, "manifest file path");
            const char* cmd_name = dc_names[i];
            cmd->callback([&d, i, cmd_name] {
                nld::Box b = d.src.resolve();
                nld::AlgorithmConfig cfg;
                cfg.max_rounds = d.rounds;
                cfg.improvement_tol = d.tol;
                cfg.stop_at_threshold = d.stop_at_threshold;
                cfg.threads = d.threads;
                nld::Architecture arch = nld::parse_architecture(cmd_name);
                ordered_json j;
                if (d.certify) {
                    nld::CertifyResult r = nld::certify_trivial_cc(b, arch, d.protocol, cfg);
                    j = ordered_json::parse(nld::transcript_to_json(r.transcript));
                    j["trivial"] = r.trivial;
                    j["threshold"] = nld::trivial_cc_threshold();
                } else {
                    nld::Transcript t;
                    if (arch == nld::Architecture::serial)
                        t = nld::serial_distill(b, cfg);
                    else if (arch == nld::Architecture::parallel)
                        t = nld::parallel_distill(b, cfg);
                    else
                        t = nld::fixed_repeat(b, d.protocol, cfg);
                    j = ordered_json::parse(nld::transcript_to_json(t));
                    j["final_box"] = box_json(t.final_box);
                }
                j["architecture"] = cmd_name;
                ordered_json params = d.src.params();
                params["rounds"] = d.rounds;
                params["tol"] = d.tol;
                params["stop_at_threshold"] = d.stop_at_threshold;
                params["certify"] = d.certify;
                params["threads"] = d.threads;
                if (i == 2) params["protocol"] = d.protocol;
                emit_json(j, d.out, d.manifest, make_manifest(cmd_name, params));
            });
        }

        // ---- scan -----------------------------------------------------------
        auto* scan_cmd =
            app.add_subcommand("scan", "grid scan of a cross-section, CSV output");
        std::string scan_cs = "I";
        std::vector<std::string> scan_protocols;
        int scan_res = 201, scan_serial_rounds = 1, scan_threads = 0;
        bool scan_chsh2 = false;
        std::string scan_out, scan_manifest;
        scan_cmd->add_option("--cs", scan_cs, "cross-section I, II, or III");
        scan_cmd
            ->add_option("--protocols", scan_protocols,
                         "columns: named protocols, SWEEP2, SERIAL")
            ->required()
            ->delimiter(',');
        scan_cmd->add_option("--res", scan_res, "grid points per axis");
        scan_cmd->add_flag("--chsh2", scan_chsh2, "append a chsh2 column");
        scan_cmd->add_option("--serial-rounds", scan_serial_rounds,
                             "round budget of a SERIAL column");
        scan_cmd->add_option("--threads", scan_threads, "worker threads (0 = all cores)");
        scan_cmd->add_option("--out", scan_out, "CSV output file")->required();
        scan_cmd->add_option("--manifest", scan_manifest, "manifest file path");
        scan_cmd->set_config("--config", "", "key=value file; explicit flags win");
        scan_cmd->callback([&] {
            nld::ScanRequest req;
            req.cs = nld::parse_cross_section(scan_cs);
            req.resolution = scan_res;
            req.protocols = scan_protocols;
            req.chsh2_col = scan_chsh2;
            req.threads = scan_threads;
            req.serial_rounds = scan_serial_rounds;
            nld::ScanResult res = nld::scan_region(req);
            std::ostringstream csv;
            nld::write_scan_csv(res, csv);
            write_file(scan_out, csv.str());
            ordered_json params{{"cs", scan_cs},          {"protocols", scan_protocols},
                                {"res", scan_res},        {"chsh2", scan_chsh2},
                                {"serial_rounds", scan_serial_rounds},
                                {"threads", scan_threads}, {"out", scan_out}};
            const std::string mp =
                scan_manifest.empty() ? scan_out + ".manifest.json" : scan_manifest;
            write_file(mp, make_manifest("scan", params).dump(2) + "\n");
        });

        // ---- census ---------------------------------------------------------
        auto* census_cmd =
            app.add_subcommand("census", "count wiring quadruples that fix the PR box");
        int census_threads = 0;
        std::string census_out, census_manifest;
        census_cmd->add_option("--threads", census_threads, "worker threads (0 = all cores)");
        census_cmd->add_option("--out", census_out, "write the result JSON to this file");
        census_cmd->add_option("--manifest", census_manifest, "manifest file path");
        census_cmd->callback([&] {
            ordered_json j;
            j["count"] = nld::count_pr_preserving(census_threads);
            emit_json(j, census_out, census_manifest,
                      make_manifest("census", {{"threads", census_threads}}));
        });

        // ---- boundary -------------------------------------------------------
        auto* bnd_cmd =
            app.add_subcommand("boundary", "evaluate a zero-gain or chord curve");
        std::string bnd_curve;
        double bnd_eta = std::nan("");
        std::string bnd_out, bnd_manifest;
        bnd_cmd->add_option("--curve", bnd_curve, "FWW_I, ABL1_I, ABL2_II, ABL1_II, CHORD_I, CHORD_II")
            ->required();
        bnd_cmd->add_option("--eta", bnd_eta, "evaluation point")->required();
        bnd_cmd->add_option("--out", bnd_out, "write the result JSON to this file");
        bnd_cmd->add_option("--manifest", bnd_manifest, "manifest file path");
        bnd_cmd->callback([&] {
            const nld::BoundaryCurve& c = nld::boundary_curve(bnd_curve);
            double omega = nld::boundary_omega(bnd_curve, bnd_eta);
            ordered_json j;
            j["curve"] = bnd_curve;
            j["cs"] = nld::cross_section_name(c.cs);
            j["eta"] = bnd_eta;
            j["omega"] = omega;
            j["domain"] = {c.eta_min, c.eta_max};
            if (bnd_curve == "CHORD_I")
                j["residual"] = std::fabs(nld::closed_form_chsh("FWW", c.cs, bnd_eta, omega) -
                                          nld::closed_form_chsh("ABL1", c.cs, bnd_eta, omega));
            else if (bnd_curve == "CHORD_II")
                j["residual"] = std::fabs(nld::closed_form_chsh("ABL2", c.cs, bnd_eta, omega) -
                                          nld::closed_form_chsh("ABL1", c.cs, bnd_eta, omega));
            else {
                std::string proto = bnd_curve.substr(0, bnd_curve.find('_'));
                j["residual"] = std::fabs(nld::closed_form_chsh(proto, c.cs, bnd_eta, omega) -
                                          (2.0 + 2.0 * omega));
            }
            emit_json(j, bnd_out, bnd_manifest,
                      make_manifest("boundary", {{"curve", bnd_curve}, {"eta", bnd_eta}}));
        });

        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
