#include "gramlearn/grammar.hpp"
#include "gramlearn/recognizer.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sys/wait.h>

using namespace gramlearn;
namespace fs = std::filesystem;

namespace {

int run(const std::string& args)
{
    const std::string cmd = std::string("'") + GRAMLEARN_CLI + "' " + args + " >/dev/null 2>&1";
    const int st = std::system(cmd.c_str());
    return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

void write_file(const fs::path& p, const std::string& text)
{
    std::ofstream(p) << text;
}

struct TempDir
{
    TempDir()
    {
        path = fs::temp_directory_path() / ("gramlearn_cli_" + std::to_string(::getpid()));
        fs::remove_all(path);
        fs::create_directories(path / "ex");
    }
    ~TempDir() { fs::remove_all(path); }
    std::string str(const std::string& name) const { return "'" + (path / name).string() + "'"; }
    fs::path path;
};

} // namespace

TEST_CASE("cli learn, parse, sample and eval")
{
    TempDir d;
    write_file(d.path / "g.g", "start: E\nE -> E \"+\" E\nE -> \"1\"\n");
    write_file(d.path / "ex" / "a.txt", "1+1\n");
    write_file(d.path / "ex" / "b.txt", "1");
    const std::string golden = "--golden " + d.str("g.g");

    CHECK(run("learn --examples " + d.str("ex") + " " + golden + " -o " + d.str("out.g") + " --report " +
              d.str("report.json") + " --audit-log " + d.str("audit.tsv")) == 0);
    REQUIRE(fs::exists(d.path / "out.g"));
    CHECK(fs::exists(d.path / "report.json"));
    CHECK(fs::exists(d.path / "audit.tsv"));
    std::ifstream in(d.path / "out.g");
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const Recognizer rec(deserialize(text));
    CHECK(rec.accepts("1+1+1"));

    write_file(d.path / "yes.txt", "1+1");
    write_file(d.path / "no.txt", "+");
    CHECK(run("parse " + d.str("out.g") + " " + d.str("yes.txt")) == 0);
    CHECK(run("parse " + d.str("out.g") + " " + d.str("no.txt")) == 3);

    CHECK(run("sample " + d.str("out.g") + " -n 3 --seed 1") == 0);
    CHECK(run("eval " + d.str("out.g") + " " + golden + " --test-n 20 --samples 20") == 0);
}

TEST_CASE("cli usage errors and budget exhaustion")
{
    TempDir d;
    write_file(d.path / "g.g", "start: E\nE -> E \"+\" E\nE -> \"1\"\n");
    write_file(d.path / "ex" / "a.txt", "1+1+1");
    CHECK(run("learn --examples " + d.str("ex") + " -o " + d.str("out.g")) == 1);
    CHECK(run("learn --examples " + d.str("ex") + " --golden " + d.str("g.g") + " --query-budget 2 -o " +
              d.str("out.g")) == 2);
    CHECK(fs::exists(d.path / "out.g"));
    write_file(d.path / "ex" / "bad.txt", "+");
    CHECK(run("learn --examples " + d.str("ex") + " --golden " + d.str("g.g") + " -o " + d.str("out2.g")) == 1);
}
