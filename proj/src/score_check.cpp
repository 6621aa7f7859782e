#include "rfsep/score_check.hpp"

#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "rfsep/eval.hpp"
#include "rfsep/signal_io.hpp"

namespace rfsep::score {

GmmSpec landscape_gmm4() { return {{0.35, 0.35, 0.15, 0.15}, {-2.0, -1.0, 2.0, 4.0}, {0.01, 0.01, 0.01, 0.01}}; }

std::vector<CheckCase> standard_cases() {
    std::vector<CheckCase> c;
    c.push_back({"gaussian", std::make_shared<GaussianScore>(GaussianScore::scalar(0.3, 0.8, Field::real)),
                 ScalarSource::gaussian_pdf(0.3, 0.8), 0.3, false});
    c.push_back({"bpsk", std::make_shared<ConstellationScore>(sig::Constellation::bpsk(), Field::real),
                 ScalarSource::uniform_atoms({1.0, -1.0}, Field::real), 0.0, false});
    c.push_back({"qpsk", std::make_shared<ConstellationScore>(sig::Constellation::qpsk(), Field::complex),
                 ScalarSource::uniform_atoms(sig::Constellation::qpsk().points, Field::complex), 0.0, true});
    const GmmSpec g2{{0.5, 0.5}, {-1.0, 1.0}, {0.25, 0.25}};
    c.push_back({"gmm2", std::make_shared<GmmScore>(g2), ScalarSource::gmm_pdf(g2), 0.0, false});
    const GmmSpec g4 = landscape_gmm4();
    double m4 = 0.0;
    for (int i = 0; i < g4.K(); ++i) m4 += g4.weights[i] * g4.means[i];
    c.push_back({"gmm4", std::make_shared<GmmScore>(g4), ScalarSource::gmm_pdf(g4), m4, false});
    c.push_back({"interference4",
                 std::make_shared<ConstellationScore>(eval::toy_interference_atoms(), std::vector<double>(4, 0.25),
                                                      Field::real),
                 ScalarSource::uniform_atoms(eval::toy_interference_atoms(), Field::real), 0.0, false});
    return c;
}

namespace {

std::vector<cplx> grid_for(const CheckCase& cc, const FdOracle& o, const Level& lv, int points) {
    const double sd = o.total_std(lv);
    std::vector<cplx> g;
    for (int i = 0; i < points; ++i) {
        const double u = -3.0 * sd + 6.0 * sd * i / (points - 1);
        g.push_back(cc.complex_line ? cplx(u, 0.5 * u + 0.1) : cplx(lv.gamma * cc.mean + u, 0.0));
    }
    return g;
}

}  // namespace

std::vector<CheckResult> run_score_check(const smooth::NoiseSchedule& sched, const std::vector<int>& levels,
                                         double tol, int points) {
    require(points >= 2, "score check: need >= 2 grid points");
    std::vector<CheckResult> out;
    for (const auto& cc : standard_cases()) {
        const FdOracle o(cc.source);
        for (int t : levels) {
            const Level lv = sched.level(t);
            const auto g = grid_for(cc, o, lv, points);
            CVec x(points);
            for (int i = 0; i < points; ++i) x[i] = g[static_cast<std::size_t>(i)];
            const CVec s = cc.model->eval(x, lv);
            CheckResult r{cc.name, t, points, 0.0, true};
            const double floor = 1.0 / o.total_std(lv);
            for (int i = 0; i < points; ++i) r.max_rel = std::max(r.max_rel, rel_error(s[i], o.score(x[i], lv), floor));
            r.pass = r.max_rel <= tol;
            out.push_back(r);
        }
    }
    return out;
}

void dump_fixtures(const std::string& dir, const smooth::NoiseSchedule& sched, const std::vector<int>& levels,
                   int points) {
    std::filesystem::create_directories(dir);
    for (const auto& cc : standard_cases()) {
        if (cc.complex_line) continue;
        const FdOracle o(cc.source);
        for (int t : levels) {
            const Level lv = sched.level(t);
            const std::string path = dir + "/" + cc.name + "_t" + std::to_string(t) + ".csv";
            std::ofstream f(path);
            require(static_cast<bool>(f), "cannot open for writing: " + path);
            f << "x,score\n";
            for (const cplx& x : grid_for(cc, o, lv, points))
                f << io::fmt_double(x.real()) << ',' << io::fmt_double(o.score(x, lv).real()) << '\n';
        }
    }
}

std::vector<CheckResult> check_fixtures(const std::string& dir, const smooth::NoiseSchedule& sched, double tol) {
    require(std::filesystem::is_directory(dir), "fixture directory not found: " + dir);
    const auto cases = standard_cases();
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(dir))
        if (e.path().extension() == ".csv") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    require(!files.empty(), "no fixtures in " + dir);
    const std::regex pat("(.+)_t([0-9]+)\\.csv");
    std::vector<CheckResult> out;
    for (const auto& p : files) {
        std::smatch m;
        const std::string fname = p.filename().string();
        require(std::regex_match(fname, m, pat), "fixture name must be <model>_t<level>.csv: " + fname);
        const std::string name = m[1];
        const int t = std::stoi(m[2]);
        const auto it = std::find_if(cases.begin(), cases.end(), [&](const CheckCase& c) { return c.name == name; });
        require(it != cases.end(), "fixture for unknown model: " + name);
        const Level lv = sched.level(t);
        const double floor = 1.0 / FdOracle(it->source).total_std(lv);
        std::ifstream f(p);
        std::string line;
        std::getline(f, line);
        require(line == "x,score", fname + ": expected header 'x,score'");
        std::vector<double> xs, ref;
        while (std::getline(f, line)) {
            if (line.empty()) continue;
            const auto comma = line.find(',');
            require(comma != std::string::npos, fname + ": malformed row");
            xs.push_back(std::stod(line.substr(0, comma)));
            ref.push_back(std::stod(line.substr(comma + 1)));
        }
        CVec x(static_cast<Eigen::Index>(xs.size()));
        for (std::size_t i = 0; i < xs.size(); ++i) x[static_cast<Eigen::Index>(i)] = xs[i];
        const CVec s = it->model->eval(x, lv);
        CheckResult r{name, t, static_cast<int>(xs.size()), 0.0, true};
        for (std::size_t i = 0; i < xs.size(); ++i)
            r.max_rel = std::max(r.max_rel, rel_error(s[static_cast<Eigen::Index>(i)], ref[i], floor));
        r.pass = !xs.empty() && r.max_rel <= tol;
        out.push_back(r);
    }
    return out;
}

}  // namespace rfsep::score
