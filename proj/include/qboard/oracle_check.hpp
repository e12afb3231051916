#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "bots.hpp"
#include "dense_state.hpp"

namespace qboard {

struct OracleOptions {
    Game game = Game::Weiqi;
    Geometry geometry{3, 3};
    int trials = 100;
    int max_plies = 0; // 0 selects points + 4
    int j_limit = 8;
    std::uint64_t seed = 1;
    // Test mode: corrupts the dense state once per trial; every trial
    // should then be reported as a mismatch.
    bool inject_fault = false;
    std::vector<Species> species{Species::Classical, Species::Superposition, Species::Counter, Species::Entangled,
                                 Species::GameWise,  Species::Pass};
};

struct OracleReport {
    int trials = 0;
    int failures = 0;
    int plies = 0;
    double min_fidelity = 1.0;
    long total_merges = 0;
    std::vector<std::string> details; // one line per failed trial

    bool ok() const { return failures == 0; }
};

inline constexpr double kOracleFidelity = 1.0 - 1e-9;

// The dense image of one committed ply, computed from the move alone:
// gate programs through the tensor embedding, game-wise moves and
// injected captures as explicit basis permutations / one-qutrit gates.
inline DenseState dense_apply_ply(DenseState psi, const PlyRecord& ply, const Superposition& before, const Geometry& g) {
    const int n = g.points();
    if (const auto* gw = std::get_if<GameWise>(&ply.move)) {
        std::vector<Amplitude> out(psi.amplitudes().begin(), psi.amplitudes().end());
        for (const auto& e : gw->entries) {
            for (const auto& t : before.terms()) {
                if (board_hash(t.board) != e.branch_hash) continue;
                Board next = t.board;
                next.set(e.point, stone(gw->color));
                const auto from = t.board.basis_index();
                out[next.basis_index()] += psi.amplitudes()[from];
                out[from] -= psi.amplitudes()[from];
            }
        }
        psi = DenseState(n, std::move(out), n);
    } else {
        for (const auto& step : compile(ply.move, g).steps) psi = embed(step.gate, step.points, n)(psi);
    }
    if (ply.injected) {
        if (ply.injected->per_branch) throw Error(ErrorCode::CaptureApproachInapplicable, "dense oracle models broadcast capture only");
        for (const auto& e : ply.injected->entries) psi = embed(gate_x(e.color), {e.point.flat(g)}, n)(psi);
    }
    return psi;
}

inline OracleReport run_oracle(const OracleOptions& o) {
    OracleReport report;
    std::mt19937_64 rng(o.seed);
    MatchConfig config;
    config.game = o.game;
    config.geometry = o.geometry;
    config.small_board = true;
    config.j_limit = o.j_limit;
    const int n = o.geometry.points();
    const int max_plies = o.max_plies > 0 ? o.max_plies : n + 4;
    config.max_moves = max_plies;
    std::vector<Species> species = o.species;
    if (o.game != Game::Weiqi) std::erase(species, Species::Pass);

    for (int trial = 0; trial < o.trials; ++trial) {
        ++report.trials;
        Match match(config);
        DenseState psi = DenseState::empty_board(n);
        bool faulted = false;
        double worst = 1.0;
        std::string failure;
        while (match.state().outcome.status == MatchStatus::Ongoing) {
            const Superposition before = match.state().state;
            const Move move = sample_move(match, rng, species);
            if (auto r = match.submit(move)) {
                failure = "engine rejected its own candidate " + to_notation(move) + ": " + r->detail;
                break;
            }
            psi = dense_apply_ply(std::move(psi), match.plies().back(), before, o.geometry);
            if (o.inject_fault && !faulted) {
                const LegalityChecker checker(match.state().state, match.rule_context());
                for (int p = 0; p < n && !faulted; ++p)
                    if (checker.free_everywhere(p)) {
                        psi = embed(gate_x(Color::Black), {p}, n)(psi);
                        faulted = true;
                    }
            }
            ++report.plies;
            const double f = fidelity(to_dense(match.state().state, n), psi);
            worst = std::min(worst, f);
            if (f < kOracleFidelity && failure.empty())
                failure = "ply " + std::to_string(match.state().ply) + " (" + to_notation(move) + "): fidelity " + std::to_string(f);
        }
        report.min_fidelity = std::min(report.min_fidelity, worst);
        report.total_merges += match.state().merge_total;
        if (!failure.empty()) {
            ++report.failures;
            report.details.push_back("trial " + std::to_string(trial) + ": " + failure);
        }
    }
    return report;
}

struct InterferenceReport {
    int matches = 0;
    int plies = 0;
    long total_merges = 0;
    int max_terms = 0;
    int rejected = 0;
};

// Randomized FIR matches restricted to classical, superposition and
// entangled moves; every merge of two branches is counted.
inline InterferenceReport run_interference(int matches, std::uint64_t seed, Geometry g = {7, 7}, int j_limit = 8) {
    InterferenceReport report;
    std::mt19937_64 rng(seed);
    MatchConfig config;
    config.game = Game::FIR;
    config.geometry = g;
    config.small_board = g.width < 5 || g.height < 5 || !g.square();
    config.j_limit = j_limit;
    const std::vector<Species> species{Species::Classical, Species::Superposition, Species::Entangled};
    for (int i = 0; i < matches; ++i) {
        Match match(config);
        while (match.state().outcome.status == MatchStatus::Ongoing) {
            const Move move = sample_move(match, rng, species);
            if (match.submit(move)) {
                ++report.rejected;
                break;
            }
            ++report.plies;
            report.max_terms = std::max(report.max_terms, static_cast<int>(match.state().state.term_count()));
        }
        ++report.matches;
        report.total_merges += match.state().merge_total;
    }
    return report;
}

} // namespace qboard
