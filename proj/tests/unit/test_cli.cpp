#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"

namespace fs = std::filesystem;

namespace {

class Cli : public ::testing::Test {
protected:
	void SetUp() override {
		dir_ = fs::temp_directory_path()
			/ ("leoacq_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
		fs::remove_all(dir_);
		fs::create_directories(dir_);
	}
	void TearDown() override { fs::remove_all(dir_); }

	int run(std::vector<std::string> args) {
		args.insert(args.begin(), "leoacq");
		std::vector<const char*> argv;
		for (const auto& a : args)
			argv.push_back(a.c_str());
		out_.str("");
		err_.str("");
		return leoacq::cli::run(static_cast<int>(argv.size()), argv.data(), out_, err_);
	}

	std::string path(const std::string& name) const { return (dir_ / name).string(); }

	void write(const std::string& name, const std::string& text) const {
		std::ofstream f(dir_ / name, std::ios::binary);
		f << text;
	}

	static std::string slurp(const fs::path& p) {
		std::ifstream in(p, std::ios::binary);
		std::stringstream s;
		s << in.rdbuf();
		return s.str();
	}

	fs::path dir_;
	std::ostringstream out_;
	std::ostringstream err_;
};

const char* kSignal = R"({
  "signal": {"prn_id": 21, "carrier_freq": 1.5e9, "doppler0": 2230.0, "code_phase0": 612.5,
             "cn0_dbhz": 48.0, "duration": 0.01},
  "acquisition": {"strategies": ["noncoherent"], "total_ms": [5]},
  "seed": 3
})";

// Wide epoch step keeps the pass down to a handful of epochs.
const char* kPass = R"({
  "signal": {"prn_id": 5, "carrier_freq": 1.5e9, "cn0_dbhz": 47.0},
  "pass": {"epoch_step": 40.0, "epoch_ms": 5},
  "acquisition": {"strategies": ["coherent", "noncoherent"], "total_ms": [1, 5],
                  "half_span": 1000, "aided": true},
  "sweep": {"first": 1.0, "last": 4.0, "step": 0.5}
})";

} // namespace

TEST_F(Cli, HelpExitsZero) {
	EXPECT_EQ(run({"synth", "--help"}), leoacq::cli::kOk);
	EXPECT_NE(out_.str().find("--config"), std::string::npos);
}

TEST_F(Cli, UnknownFlagIsUsageError) {
	EXPECT_EQ(run({"synth", "--bogus"}), leoacq::cli::kUsage);
	EXPECT_FALSE(err_.str().empty());
	EXPECT_EQ(run({}), leoacq::cli::kUsage);
	EXPECT_EQ(run({"pass", "--out", path("p.csv")}), leoacq::cli::kUsage);
}

TEST_F(Cli, SynthThenAcquireDetects) {
	write("s.json", kSignal);
	ASSERT_EQ(run({"synth", "--config", path("s.json"), "--out", path("s.bin")}),
		leoacq::cli::kOk) << err_.str();
	ASSERT_TRUE(fs::exists(path("s.bin.truth")));
	EXPECT_EQ(fs::file_size(path("s.bin")), 4u * 40920u);
	ASSERT_EQ(run({"acquire", "--input", path("s.bin"), "--strategy", "noncoherent", "--total-ms", "5",
		"--out", path("r.csv")}), leoacq::cli::kOk) << err_.str();
	std::istringstream csv(slurp(path("r.csv")));
	std::string line;
	std::getline(csv, line);
	EXPECT_EQ(line, "t_s,strategy,total_ms,doppler_hz,code_phase_samples,mtsmr,mtmr,decided");
	int rows = 0;
	while (std::getline(csv, line)) {
		++rows;
		EXPECT_EQ(line.substr(line.rfind(',') + 1), "1") << line;
		EXPECT_NE(line.find(",noncoherent,5,2200,2450,"), std::string::npos) << line;
	}
	EXPECT_EQ(rows, 2);
}

TEST_F(Cli, SynthNeedsSeedForNoise) {
	std::string text = kSignal;
	text.replace(text.find("\"seed\": 3"), 9, "\"format\": \"float32-real\"");
	write("s.json", text);
	EXPECT_EQ(run({"synth", "--config", path("s.json"), "--out", path("s.bin")}), leoacq::cli::kUsage);
	EXPECT_EQ(run({"synth", "--config", path("s.json"), "--out", path("s.bin"), "--seed", "4"}),
		leoacq::cli::kOk) << err_.str();
}

TEST_F(Cli, TruncatedFileIsDataError) {
	write("t.bin", std::string(4092 * 4 + 3, '\0'));
	EXPECT_EQ(run({"acquire", "--input", path("t.bin"), "--format", "float32-real", "--out", path("r.csv")}),
		leoacq::cli::kData);
	EXPECT_NE(err_.str().find("byte offset 16368"), std::string::npos) << err_.str();
}

TEST_F(Cli, BadConfigIsDataError) {
	write("bad.json", R"({"signal": {"carrier_freq": 1.5e9, "sample_rate": 1e6}, "seed": 1})");
	EXPECT_EQ(run({"synth", "--config", path("bad.json"), "--out", path("x.bin")}), leoacq::cli::kData);
	EXPECT_FALSE(err_.str().empty());
}

TEST_F(Cli, PassProfile) {
	ASSERT_EQ(run({"pass", "--carrier", "1.5e9", "--step", "10", "--out", path("p.csv")}), leoacq::cli::kOk)
		<< err_.str();
	const auto text = slurp(path("p.csv"));
	EXPECT_EQ(text.substr(0, text.find('\n')),
		"t_s,range_m,elev_deg,vrad_mps,doppler_hz,doppler_rate_hzps,path_loss_db");
}

TEST_F(Cli, DurationIsDeterministic) {
	write("p.json", kPass);
	for (const char* sub : {"a", "b"})
		ASSERT_EQ(run({"duration", "--config", path("p.json"), "--seed", "9", "--out-dir", path(sub)}),
			leoacq::cli::kOk) << err_.str();
	const auto a = slurp(dir_ / "a" / "timeline.csv");
	EXPECT_FALSE(a.empty());
	EXPECT_EQ(a, slurp(dir_ / "b" / "timeline.csv"));
	EXPECT_EQ(slurp(dir_ / "a" / "duration_vs_T.csv"), slurp(dir_ / "b" / "duration_vs_T.csv"));
}

TEST_F(Cli, SweepFromRecordingMatchesSynthesis) {
	write("p.json", kPass);
	ASSERT_EQ(run({"synth", "--config", path("p.json"), "--seed", "9", "--out", path("pass.bin")}),
		leoacq::cli::kOk) << err_.str();
	ASSERT_EQ(run({"sweep", "--config", path("p.json"), "--seed", "9", "--out-dir", path("syn")}),
		leoacq::cli::kOk) << err_.str();
	ASSERT_EQ(run({"sweep", "--config", path("p.json"), "--input", path("pass.bin"), "--out-dir", path("rec")}),
		leoacq::cli::kOk) << err_.str();
	// The recording stores float32, so indicators may differ in the last
	// digits; estimates and labels must not.
	auto columns = [](const std::string& text) {
		std::vector<std::string> kept;
		std::istringstream in(text);
		std::string line;
		while (std::getline(in, line)) {
			std::vector<std::string> cells;
			std::stringstream ss(line);
			std::string cell;
			while (std::getline(ss, cell, ','))
				cells.push_back(cell);
			kept.push_back(cells.at(0) + cells.at(1) + cells.at(2) + cells.at(3) + cells.at(4) + cells.at(8)
				+ cells.at(9) + cells.at(10));
		}
		return kept;
	};
	const auto syn = columns(slurp(dir_ / "syn" / "timeline.csv"));
	EXPECT_GT(syn.size(), 20u);
	EXPECT_EQ(syn, columns(slurp(dir_ / "rec" / "timeline.csv")));
	for (const char* f : {"bounds.csv", "pf_curve_coherent_1ms.csv", "pf_curve_noncoherent_5ms.csv"})
		EXPECT_TRUE(fs::exists(dir_ / "rec" / f)) << f;
}
