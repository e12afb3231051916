#include <atomic>
#include <csignal>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "qboard/http_server.hpp"
#include "qboard/qboard.hpp"

using namespace qboard;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitVerification = 3;

struct CommonFlags {
    std::string game = "fir";
    std::string size = "15";
    int j_limit = 8;
    std::string capture = "broadcast";
    int p2_budget = kDefaultP2Budget;
    std::uint64_t seed = 0;
    int max_moves = 0;
    bool small_board = false;
    std::string out;
};

void add_common(CLI::App* app, CommonFlags& f) {
    app->add_option("--game", f.game, "fir or weiqi")->check(CLI::IsMember({"fir", "weiqi"}));
    app->add_option("--size", f.size, "board size N, or WxH together with --small-board");
    app->add_option("--j-limit", f.j_limit, "maximum number of branches");
    app->add_option("--capture", f.capture, "capture approach")->check(CLI::IsMember({"broadcast", "remove-everywhere", "per-branch"}));
    app->add_option("--p2-budget", f.p2_budget, "maximum correlated points per move");
    app->add_option("--seed", f.seed, "random seed");
    app->add_option("--max-moves", f.max_moves, "ply cap (default 4*N*N)");
    app->add_flag("--small-board", f.small_board, "allow boards below 5x5 and rectangular boards");
    app->add_option("--out", f.out, "output record (.qbg) or directory");
}

Geometry parse_size(const std::string& s) {
    const auto x = s.find('x');
    try {
        if (x == std::string::npos) {
            const int n = std::stoi(s);
            return {n, n};
        }
        return {std::stoi(s.substr(0, x)), std::stoi(s.substr(x + 1))};
    } catch (const std::exception&) {
        throw Error(ErrorCode::InvalidConfig, "bad --size '" + s + "'");
    }
}

MatchConfig make_config(const CommonFlags& f) {
    MatchConfig c;
    c.game = parse_game(f.game);
    c.geometry = parse_size(f.size);
    c.j_limit = f.j_limit;
    c.capture_approach = parse_capture_approach(f.capture);
    c.p2_budget = f.p2_budget;
    c.seed = f.seed;
    c.max_moves = f.max_moves;
    c.small_board = f.small_board;
    c.validate();
    return c;
}

void print_state(const Match& m, std::ostream& os) {
    const MatchState& ms = m.state();
    const Superposition& s = ms.state;
    os << "ply " << ms.ply << ", " << s.term_count() << " branch" << (s.term_count() == 1 ? "" : "es") << ", "
       << (ms.to_move == Color::Black ? "black" : "white") << " to move";
    if (ms.game_wise_allowed) os << ", game-wise allowed";
    os << "\n";
    std::size_t i = 0;
    for (const auto& t : s.terms()) {
        os << "branch " << i++ << "  hash " << board_hash(t.board) << "  amplitude " << std::showpos << std::fixed << std::setprecision(4)
           << t.amplitude.real();
        if (std::abs(t.amplitude.imag()) > kZeroAmplitude) os << t.amplitude.imag() << "i";
        os << std::noshowpos << std::defaultfloat << "\n" << render(t.board);
    }
    if (s.term_count() > 1) {
        // Marginals: black probability per point in tenths, white as letters.
        const Geometry& g = s.geometry();
        const auto marg = marginals(s);
        os << "marginals (digits: p(black) in tenths, lowercase: p(white) a=0.1 .. j=1.0)\n";
        for (int r = g.height - 1; r >= 0; --r) {
            os << std::setw(3) << r + 1 << " ";
            for (int c = 0; c < g.width; ++c) {
                const auto& p = marg[static_cast<std::size_t>(PointIndex{c, r}.flat(g))];
                char ch = '.';
                if (p[0] > kStateTolerance) ch = static_cast<char>('0' + std::min(9, static_cast<int>(p[0] * 10 + 0.5)));
                else if (p[2] > kStateTolerance) ch = static_cast<char>('a' + std::min(9, static_cast<int>(p[2] * 10 + 0.5) - 1));
                os << ' ' << ch;
            }
            os << "\n";
        }
    }
    if (ms.outcome.status != MatchStatus::Ongoing) os << "outcome: " << to_json(ms.outcome).dump() << "\n";
}

int cmd_play(const CommonFlags& f, const std::string& bot, const std::string& bot_color) {
    Match m(make_config(f));
    std::mt19937_64 rng(f.seed);
    const std::optional<Color> bot_side = bot == "none" ? std::nullopt : std::optional<Color>(parse_color(bot_color));
    const BotPolicy policy = bot == "greedy" ? BotPolicy::GreedyBranch : BotPolicy::RandomLegal;
    print_state(m, std::cout);
    std::string line;
    while (m.state().outcome.status == MatchStatus::Ongoing) {
        if (bot_side && *bot_side == m.state().to_move) {
            const Move mv = bot_move(m, policy, rng);
            std::cout << "bot plays " << to_notation(mv) << "\n";
            if (auto r = m.submit(mv)) {
                std::cout << "bot move rejected: " << to_string(r->code) << ": " << r->detail << "\n";
                break;
            }
            print_state(m, std::cout);
            continue;
        }
        std::cout << (m.state().to_move == Color::Black ? "b" : "w") << "> " << std::flush;
        if (!std::getline(std::cin, line)) break;
        if (line == "quit" || line == "exit") break;
        if (line.empty()) continue;
        if (line == "show") {
            print_state(m, std::cout);
            continue;
        }
        if (line.rfind("legal", 0) == 0) {
            EnumerationOptions opts;
            if (line.size() > 6) opts.filter = parse_species(line.substr(6));
            for (const auto& mv : enumerate_legal(m, opts)) std::cout << "  " << to_notation(mv) << "\n";
            continue;
        }
        Move mv;
        try {
            mv = parse_move(line, m.state().to_move);
        } catch (const Error& e) {
            std::cout << e.what() << "\n";
            continue;
        }
        if (auto r = m.submit(mv)) {
            std::cout << to_string(r->code) << ": " << r->detail << "\n";
            continue;
        }
        if (const auto& inj = m.plies().back().injected) std::cout << "mandatory capture " << to_notation(*inj) << "\n";
        print_state(m, std::cout);
    }
    if (!f.out.empty()) {
        save_record(record_of(m), f.out);
        std::cout << "record written to " << f.out << "\n";
    }
    return kExitOk;
}

int cmd_selfplay(const CommonFlags& f, int count, const std::string& black, const std::string& white) {
    const MatchConfig base = make_config(f);
    const BotPolicy pb = parse_policy(black);
    const BotPolicy pw = parse_policy(white);
    if (!f.out.empty()) std::filesystem::create_directories(f.out);
    std::map<std::string, int> tally;
    long plies = 0;
    long merges = 0;
    int max_terms = 0;
    for (int i = 0; i < count; ++i) {
        MatchConfig c = base;
        c.seed = f.seed + static_cast<std::uint64_t>(i);
        Match m(c);
        std::mt19937_64 rng(c.seed);
        while (m.state().outcome.status == MatchStatus::Ongoing) {
            const Move mv = bot_move(m, m.state().to_move == Color::Black ? pb : pw, rng);
            if (auto r = m.submit(mv)) {
                std::cerr << "match " << i << ": bot move " << to_notation(mv) << " rejected: " << r->detail << "\n";
                return kExitVerification;
            }
            max_terms = std::max(max_terms, static_cast<int>(m.state().state.term_count()));
        }
        ++tally[std::string(to_string(m.state().outcome.status))];
        plies += m.state().ply;
        merges += m.state().merge_total;
        if (!f.out.empty()) {
            std::ostringstream name;
            name << "match_" << std::setw(4) << std::setfill('0') << i << ".qbg";
            save_record(record_of(m), (std::filesystem::path(f.out) / name.str()).string());
        }
    }
    nlohmann::json summary = {{"v", 1}, {"matches", count}, {"plies", plies}, {"merges", merges}, {"max_terms", max_terms}};
    for (const auto& [k, v] : tally) summary["outcomes"][k] = v;
    if (count == 0) summary["outcomes"] = nlohmann::json::object();
    std::cout << summary.dump() << "\n";
    return kExitOk;
}

int cmd_replay(const std::string& file, bool quiet) {
    GameRecord rec;
    try {
        rec = load_record(file);
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return kExitValidation;
    }
    try {
        const Match m = replay(rec);
        if (!quiet) print_state(m, std::cout);
        std::cout << "OK, state hash matches " << state_hash(m.state().state) << "\n";
        return kExitOk;
    } catch (const ReplayMismatch& e) {
        std::cout << "ReplayMismatch at ply " << e.ply() << ": " << e.what() << "\n";
        return kExitVerification;
    }
}

int cmd_oracle(const CommonFlags& f, int trials, bool fault, bool restricted) {
    const Geometry g = parse_size(f.size);
    if (restricted) {
        const auto r = run_interference(trials, f.seed, g, f.j_limit);
        std::cout << "no-interference: " << r.matches << " matches, " << r.plies << " plies, merge_count " << r.total_merges << "\n";
        return r.total_merges == 0 && r.rejected == 0 ? kExitOk : kExitVerification;
    }
    OracleOptions o;
    o.game = parse_game(f.game);
    o.geometry = g;
    o.trials = trials;
    o.j_limit = f.j_limit;
    o.seed = f.seed;
    o.inject_fault = fault;
    if (g.points() > kDefaultOracleCap) throw Error(ErrorCode::OracleTooLarge, "oracle boards are limited to 12 points");
    const auto r = run_oracle(o);
    for (const auto& d : r.details) std::cout << "mismatch " << d << "\n";
    std::cout << (r.ok() ? "PASS" : "FAIL") << " " << r.trials << " trials, " << r.plies << " plies, min fidelity " << std::setprecision(12)
              << r.min_fidelity << ", merge_count " << r.total_merges << "\n";
    return r.ok() ? kExitOk : kExitVerification;
}

std::atomic<bool> g_stopping{false};
httplib::Server* g_server = nullptr;

int cmd_serve(std::string bind, int port, std::string data_dir) {
    ServeOptions o = serve_options_from_env();
    if (!bind.empty()) o.bind = bind;
    if (port > 0) o.port = port;
    if (!data_dir.empty()) o.data_dir = data_dir;
    SessionService service(o.data_dir);
    httplib::Server server;
    install_routes(server, service, &g_stopping);
    g_server = &server;
    std::signal(SIGINT, [](int) {
        g_stopping = true;
        if (g_server) g_server->stop();
    });
    std::signal(SIGTERM, [](int) {
        g_stopping = true;
        if (g_server) g_server->stop();
    });
    std::cout << "listening on " << o.bind << ":" << o.port;
    if (o.data_dir) std::cout << " (data in " << o.data_dir->string() << ")";
    std::cout << std::endl;
    if (!server.listen(o.bind, o.port)) {
        std::cerr << "cannot bind " << o.bind << ":" << o.port << "\n";
        return kExitValidation;
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum five-in-a-row and weiqi engine"};
    app.require_subcommand(1);

    CommonFlags play_f, self_f, oracle_f;
    std::string bot = "none", bot_color = "w";
    auto* play = app.add_subcommand("play", "interactive terminal match");
    add_common(play, play_f);
    play->add_option("--bot", bot, "opponent: none, random or greedy")->check(CLI::IsMember({"none", "random", "greedy"}));
    play->add_option("--bot-color", bot_color, "color played by the bot (b or w)")->check(CLI::IsMember({"b", "w"}));

    int count = 10;
    std::string black = "random", white = "random";
    auto* self = app.add_subcommand("selfplay", "bot against bot");
    add_common(self, self_f);
    self->add_option("--count", count, "number of matches")->check(CLI::NonNegativeNumber);
    self->add_option("--black", black, "black policy")->check(CLI::IsMember({"random", "greedy"}));
    self->add_option("--white", white, "white policy")->check(CLI::IsMember({"random", "greedy"}));

    std::string file;
    bool quiet = false;
    auto* rep = app.add_subcommand("replay", "verify a .qbg record");
    rep->add_option("file", file, "record")->required();
    rep->add_flag("-q,--quiet", quiet, "only print the verdict");

    int trials = 100;
    bool fault = false, restricted = false;
    oracle_f.size = "3";
    oracle_f.game = "weiqi";
    auto* oracle = app.add_subcommand("oracle-check", "sparse engine against the dense statevector");
    add_common(oracle, oracle_f);
    oracle->add_option("--trials", trials, "number of random sequences");
    oracle->add_flag("--inject-fault", fault, "corrupt the dense state (harness self-test)");
    oracle->add_flag("--restricted", restricted, "no-interference run: FIR, classical/superposition/entangled moves only");

    std::string bind, data_dir;
    int port = 0;
    auto* serve = app.add_subcommand("serve", "run the match service (env BIND_ADDR, DATA_DIR)");
    serve->add_option("--bind", bind, "address to bind");
    serve->add_option("--port", port, "port");
    serve->add_option("--data-dir", data_dir, "persistence directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (*play) return cmd_play(play_f, bot, bot_color);
        if (*self) return cmd_selfplay(self_f, count, black, white);
        if (*rep) return cmd_replay(file, quiet);
        if (*oracle) return cmd_oracle(oracle_f, trials, fault, restricted);
        if (*serve) return cmd_serve(bind, port, data_dir);
    } catch (const Error& e) {
        std::cerr << to_string(e.code()) << ": " << e.what() << "\n";
        return kExitValidation;
    }
    return kExitOk;
}
