#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "artic/io_util.hpp"
#include "artic/keypoints.hpp"
#include "artic/ply_io.hpp"
#include "test_helpers.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int run_cli(const std::string& args) {
    const std::string command =
        std::string(ARTIC_RIG_BINARY) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(command.c_str());
    return WEXITSTATUS(status);
}

// Relative path -> file bytes for every regular file under root.
std::map<std::string, std::string> snapshot_tree(const fs::path& root) {
    std::map<std::string, std::string> files;
    for (const auto& entry : fs::recursive_directory_iterator(root)) {
        if (entry.is_regular_file()) {
            files[fs::relative(entry.path(), root).string()] =
                artic::read_file_bytes(entry.path());
        }
    }
    return files;
}

void run_pipeline(const fs::path& root, int views) {
    const std::string fixtures = (root / "fixtures").string();
    REQUIRE(run_cli("make-fixtures --out " + fixtures +
                    " --seed 5 --density 150") == 0);
    REQUIRE(run_cli("repose-bike --bike-dir " + fixtures + "/bike" +
                    " --theta-s 90 --theta-p 90 --out " + (root / "posed").string()) ==
            0);
    REQUIRE(run_cli("refine --bike-dir " + fixtures + "/bike" + " --skeleton " +
                    fixtures + "/skeleton.json --pose " + fixtures +
                    "/rider_pose.json --iters 10 --out " +
                    (root / "refined").string()) == 0);
    REQUIRE(run_cli("compose --bike-dir " + fixtures + "/bike" + " --skeleton " +
                    fixtures + "/skeleton.json --pose " + fixtures +
                    "/rider_pose.json --theta-p 35 --theta-s 10 --iters 10"
                    " --gradient-mode analytic --out " +
                    (root / "cyclist").string()) == 0);
    REQUIRE(run_cli("dataset-gen --bike-dir " + fixtures + "/bike" + " --views " +
                    std::to_string(views) + " --size 128 --out " +
                    (root / "dataset").string()) == 0);
}

}  // namespace

TEST_CASE("pipeline runs end to end and is byte-deterministic") {
    artic::test::TempDir dir("cli_e2e");
    const fs::path run1 = dir.path() / "run1";
    const fs::path run2 = dir.path() / "run2";
    run_pipeline(run1, 6);
    run_pipeline(run2, 6);

    const auto tree1 = snapshot_tree(run1);
    const auto tree2 = snapshot_tree(run2);
    REQUIRE(!tree1.empty());
    REQUIRE(tree1.size() == tree2.size());
    for (const auto& [name, bytes] : tree1) {
        INFO("file: " << name);
        REQUIRE(tree2.count(name) == 1);
        CHECK(bytes == tree2.at(name));
    }
}

TEST_CASE("reposed bike keeps every splat and turns its keypoints") {
    artic::test::TempDir dir("cli_repose");
    const std::string fixtures = (dir.path() / "fx").string();
    REQUIRE(run_cli("make-fixtures --out " + fixtures + " --seed 8 --density 110") ==
            0);
    REQUIRE(run_cli("repose-bike --bike-dir " + fixtures + "/bike" +
                    " --theta-s 90 --theta-p 90 --out " +
                    (dir.path() / "posed").string()) == 0);
    const artic::GaussianSet posed =
        artic::load_splat(dir.path() / "posed" / "bike_posed.ply");
    CHECK(posed.size() == 3 * 110);
    const artic::KeypointSet keypoints =
        artic::load_keypoints(dir.path() / "posed" / "keypoints_posed.json");
    // Quarter-turned handlebar runs along X; quarter-turned cranks along Y.
    const artic::Vec3 bar = keypoints.at("handle_L") - keypoints.at("handle_R");
    CHECK(std::abs(bar.x()) > 0.4);
    CHECK(std::abs(bar.z()) < 1e-6);
    const artic::Vec3 crank = keypoints.at("pedal_L") - keypoints.at("pedal_R");
    CHECK(std::abs(crank.y()) > 0.3);
    CHECK(std::abs(crank.x()) < 1e-6);
}

TEST_CASE("dataset layout matches the per-part contract") {
    artic::test::TempDir dir("cli_dataset");
    const std::string fixtures = (dir.path() / "fx").string();
    REQUIRE(run_cli("make-fixtures --out " + fixtures + " --seed 1 --density 120") ==
            0);
    REQUIRE(run_cli("dataset-gen --bike-dir " + fixtures + "/bike --views 4"
                    " --size 96 --out " +
                    (dir.path() / "ds").string()) == 0);

    for (const char* part : {"frame_rear", "pedals", "steering_front"}) {
        const fs::path part_dir = dir.path() / "ds" / part;
        CHECK(fs::exists(part_dir / "keypoints.json"));
        for (int i = 0; i < 4; ++i) {
            char name[32];
            std::snprintf(name, sizeof(name), "view_%03d", i);
            CHECK(fs::exists(part_dir / "img" / (std::string(name) + ".png")));
            CHECK(fs::exists(part_dir / "mask" / (std::string(name) + ".png")));
            CHECK(fs::exists(part_dir / "cam" / (std::string(name) + ".json")));
        }
        const json cam0 = json::parse(
            artic::read_file_bytes(part_dir / "cam" / "view_000.json"));
        CHECK(cam0["intrinsics"][0][0] == doctest::Approx(2084.97));
        CHECK(cam0["extrinsics"][0][0] == doctest::Approx(1.0));
        CHECK(cam0["center"][2] == doctest::Approx(-12.0));
    }
}

TEST_CASE("refine emits a report with the full trace") {
    artic::test::TempDir dir("cli_refine");
    const std::string fixtures = (dir.path() / "fx").string();
    REQUIRE(run_cli("make-fixtures --out " + fixtures + " --seed 2 --density 100") ==
            0);
    REQUIRE(run_cli("refine --bike-dir " + fixtures + "/bike --skeleton " +
                    fixtures + "/skeleton.json --pose " + fixtures +
                    "/rider_pose.json --out " + (dir.path() / "out").string()) == 0);
    const json report = json::parse(
        artic::read_file_bytes(dir.path() / "out" / "refine_report.json"));
    CHECK(report["loss_trace"].size() == 51);
    CHECK(double(report["best_loss"]) <= double(report["initial_loss"]));
    CHECK(fs::exists(dir.path() / "out" / "pose_refined.json"));
}

TEST_CASE("derive-angles on the fixture rider") {
    artic::test::TempDir dir("cli_derive");
    const std::string fixtures = (dir.path() / "fx").string();
    REQUIRE(run_cli("make-fixtures --out " + fixtures + " --seed 3") == 0);
    REQUIRE(run_cli("derive-angles --skeleton " + fixtures + "/skeleton.json" +
                    " --pose " + fixtures + "/rider_pose.json --out " +
                    (dir.path() / "out").string()) == 0);
    const json angles = json::parse(
        artic::read_file_bytes(dir.path() / "out" / "derived_angles.json"));
    CHECK(angles.contains("theta_p_deg"));
    CHECK(angles.contains("theta_s_deg"));
    // The symmetric riding posture has wrists mirrored across the bike
    // plane: the derived steering angle is ~0.
    CHECK(std::abs(double(angles["theta_s_deg"])) < 5.0);
}

TEST_CASE("config-file driven run with flag override") {
    artic::test::TempDir dir("cli_config");
    const std::string fixtures = (dir.path() / "fx").string();
    REQUIRE(run_cli("make-fixtures --out " + fixtures + " --seed 4 --density 80") ==
            0);
    {
        std::ofstream config(dir.path() / "run.ini");
        config << "[assets]\nbike_dir = " << fixtures << "/bike\n"
               << "[bike_pose]\ntheta_s_deg = 45\n"
               << "[output]\ndir = " << (dir.path() / "from_config").string()
               << "\n";
    }
    REQUIRE(run_cli("repose-bike --config " + (dir.path() / "run.ini").string()) ==
            0);
    CHECK(fs::exists(dir.path() / "from_config" / "bike_posed.ply"));

    // --out overrides the config key.
    REQUIRE(run_cli("repose-bike --config " + (dir.path() / "run.ini").string() +
                    " --out " + (dir.path() / "flag_wins").string()) == 0);
    CHECK(fs::exists(dir.path() / "flag_wins" / "bike_posed.ply"));
}

TEST_CASE("compose concatenates a provided rider splat") {
    artic::test::TempDir dir("cli_rider");
    const std::string fixtures = (dir.path() / "fx").string();
    REQUIRE(run_cli("make-fixtures --out " + fixtures + " --seed 6 --density 90") ==
            0);
    // A stand-in rider body: the pedals part reposed as a separate splat
    // file (same SH degree as the bike parts).
    REQUIRE(run_cli("repose-bike --bike-dir " + fixtures + "/bike --out " +
                    (dir.path() / "rider").string()) == 0);
    REQUIRE(run_cli("compose --bike-dir " + fixtures + "/bike --skeleton " +
                    fixtures + "/skeleton.json --pose " + fixtures +
                    "/rider_pose.json --rider-splat " +
                    (dir.path() / "rider" / "bike_posed.ply").string() +
                    " --iters 5 --out " + (dir.path() / "out").string()) == 0);
    const json report = json::parse(
        artic::read_file_bytes(dir.path() / "out" / "compose_report.json"));
    // 3 parts of 90 splats each, plus the 270-splat stand-in rider.
    CHECK(int(report["splat_count"]) == 540);
}

TEST_CASE("repose-bike rejects angle derivation") {
    artic::test::TempDir dir("cli_repose_derive");
    const std::string fixtures = (dir.path() / "fx").string();
    REQUIRE(run_cli("make-fixtures --out " + fixtures + " --seed 0 --density 60") ==
            0);
    CHECK(run_cli("repose-bike --bike-dir " + fixtures +
                  "/bike --theta-p derive --out " + (dir.path() / "out").string()) ==
          2);
}

TEST_CASE("sh-mode flag switches band rotation off") {
    artic::test::TempDir dir("cli_shmode");
    const std::string fixtures = (dir.path() / "fx").string();
    REQUIRE(run_cli("make-fixtures --out " + fixtures + " --seed 10 --density 70") ==
            0);
    const std::string common = "repose-bike --bike-dir " + fixtures +
                               "/bike --theta-y 45 --out ";
    REQUIRE(run_cli(common + (dir.path() / "full").string()) == 0);
    REQUIRE(run_cli(common + (dir.path() / "dc").string() + " --sh-mode dc-only") ==
            0);
    const artic::GaussianSet full =
        artic::load_splat(dir.path() / "full" / "bike_posed.ply");
    const artic::GaussianSet dc =
        artic::load_splat(dir.path() / "dc" / "bike_posed.ply");
    CHECK(full.means == dc.means);
    CHECK(full.sh_coeffs != dc.sh_coeffs);  // bands left unrotated
}

TEST_CASE("failure classes map to documented exit codes") {
    artic::test::TempDir dir("cli_errors");
    // Missing bike dir -> io error (3).
    CHECK(run_cli("repose-bike --bike-dir " + (dir.path() / "nope").string() +
                  " --out " + (dir.path() / "out").string()) == 3);
    // Bad config file -> config error (2).
    {
        std::ofstream bad(dir.path() / "bad.ini");
        bad << "[assets\n";
    }
    CHECK(run_cli("repose-bike --config " + (dir.path() / "bad.ini").string()) == 2);
    // Unknown config key -> config error (2).
    {
        std::ofstream bad(dir.path() / "bad2.ini");
        bad << "[assets]\nmystery = 1\n";
    }
    CHECK(run_cli("repose-bike --config " + (dir.path() / "bad2.ini").string()) ==
          2);
    // Schema violation -> 4.
    const std::string fixtures = (dir.path() / "fx").string();
    REQUIRE(run_cli("make-fixtures --out " + fixtures + " --seed 0 --density 60") ==
            0);
    {
        std::ofstream bad(dir.path() / "bad_pose.json");
        bad << R"({"thetas": [[0,0,0]]})";
    }
    CHECK(run_cli("refine --bike-dir " + fixtures + "/bike --skeleton " + fixtures +
                  "/skeleton.json --pose " + (dir.path() / "bad_pose.json").string() +
                  " --out " + (dir.path() / "out").string()) == 4);
    // Degenerate geometry -> 5 (ankles coincide in X-Y for angle derivation).
    {
        std::ofstream pose(dir.path() / "degen_pose.json");
        pose << R"({"thetas": [)";
        for (int i = 0; i < 24; ++i) {
            pose << (i ? "," : "") << "[0,0,0]";
        }
        pose << "]}";
    }
    CHECK(run_cli("derive-angles --skeleton " + fixtures + "/skeleton.json" +
                  " --pose " + (dir.path() / "degen_pose.json").string() +
                  " --out " + (dir.path() / "out").string()) == 5);
}

TEST_CASE("failed runs leave no partial outputs") {
    artic::test::TempDir dir("cli_atomic");
    const std::string fixtures = (dir.path() / "fx").string();
    REQUIRE(run_cli("make-fixtures --out " + fixtures + " --seed 0 --density 60") ==
            0);
    // An output path blocked by a regular file cannot be created: the
    // command fails and nothing appears at or under the final path.
    const fs::path blocker = dir.path() / "blocker";
    std::ofstream(blocker) << "occupied";
    const fs::path out = blocker / "sub";
    CHECK(run_cli("repose-bike --bike-dir " + fixtures + "/bike --out " +
                  out.string()) != 0);
    CHECK(!fs::exists(out));
    CHECK(fs::is_regular_file(blocker));
}
