#include "fixture_repo.hpp"

#include <ctime>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "cefr/process.hpp"

namespace cefr::testing {

namespace fs = std::filesystem;

TempDir::TempDir(const std::string& prefix) {
  std::random_device device;
  std::mt19937_64 rng(device());
  const fs::path base = fs::temp_directory_path();
  for (int attempt = 0; attempt < 100; ++attempt) {
    const fs::path candidate = base / (prefix + "-" + std::to_string(rng() % 1000000000));
    if (fs::create_directory(candidate)) {
      path_ = candidate;
      return;
    }
  }
  throw std::runtime_error("cannot create a temporary directory");
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

std::int64_t utc(int year, int month, int day) {
  std::tm tm{};
  tm.tm_year = year - 1900;
  tm.tm_mon = month - 1;
  tm.tm_mday = day;
  tm.tm_hour = 12;
  return static_cast<std::int64_t>(timegm(&tm));
}

FixtureRepo::FixtureRepo(fs::path dir) : dir_(std::move(dir)) {
  fs::create_directories(dir_);
  git({"init", "-q", "-b", "main"});
}

std::string FixtureRepo::git(const std::vector<std::string>& args,
                             const std::vector<std::string>& env) const {
  std::vector<std::string> argv = {"git", "-C", dir_.string(), "-c", "commit.gpgsign=false",
                                   "-c", "core.autocrlf=false"};
  argv.insert(argv.end(), args.begin(), args.end());
  std::vector<std::string> full_env = {"GIT_CONFIG_NOSYSTEM=1", "HOME=" + dir_.string(),
                                       "GIT_TERMINAL_PROMPT=0"};
  full_env.insert(full_env.end(), env.begin(), env.end());
  const auto result = run_process(argv, {}, ProcessOptions{std::nullopt, full_env});
  if (result.exit_code != 0) {
    std::string command;
    for (const auto& a : args) command += " " + a;
    throw std::runtime_error("git" + command + " failed: " + result.err);
  }
  return result.out;
}

std::vector<std::string> FixtureRepo::identity_env(const Author& author, std::int64_t time) const {
  const std::string date = "@" + std::to_string(time) + " +0000";
  return {"GIT_AUTHOR_NAME=" + author.name,     "GIT_AUTHOR_EMAIL=" + author.email,
          "GIT_AUTHOR_DATE=" + date,            "GIT_COMMITTER_NAME=" + author.name,
          "GIT_COMMITTER_EMAIL=" + author.email, "GIT_COMMITTER_DATE=" + date};
}

std::string FixtureRepo::head() const {
  std::string sha = git({"rev-parse", "HEAD"});
  while (!sha.empty() && sha.back() == '\n') sha.pop_back();
  return sha;
}

void FixtureRepo::write(const std::string& relative, const std::string& content) {
  const fs::path target = dir_ / relative;
  fs::create_directories(target.parent_path());
  std::ofstream out(target, std::ios::binary | std::ios::trunc);
  out << content;
}

void FixtureRepo::remove(const std::string& relative) { git({"rm", "-q", "--", relative}); }

void FixtureRepo::rename(const std::string& from, const std::string& to) {
  fs::create_directories((dir_ / to).parent_path());
  git({"mv", "--", from, to});
  pending_renames_[from] = to;
}

std::string FixtureRepo::commit(const Author& author, std::int64_t time, const std::string& message) {
  git({"add", "-A"});
  git({"commit", "-q", "--allow-empty", "-m", message}, identity_env(author, time));
  ScriptedCommit entry;
  entry.sha = head();
  std::istringstream parents(git({"rev-list", "--parents", "-n", "1", "HEAD"}));
  std::string token;
  parents >> token;
  while (parents >> token) entry.parents.push_back(token);
  entry.author = author;
  entry.time = time;
  entry.renames = std::move(pending_renames_);
  pending_renames_.clear();
  log_.push_back(entry);
  return entry.sha;
}

void FixtureRepo::checkout(const std::string& ref) { git({"checkout", "-q", ref}); }

void FixtureRepo::checkout_new_branch(const std::string& name) {
  git({"checkout", "-q", "-b", name});
}

std::string FixtureRepo::merge(const std::string& branch, const Author& author, std::int64_t time) {
  git({"merge", "-q", "--no-ff", "--no-edit", "-m", "Merge " + branch, branch},
      identity_env(author, time));
  ScriptedCommit entry;
  entry.sha = head();
  std::istringstream parents(git({"rev-list", "--parents", "-n", "1", "HEAD"}));
  std::string token;
  parents >> token;
  while (parents >> token) entry.parents.push_back(token);
  entry.author = author;
  entry.time = time;
  entry.merge = true;
  log_.push_back(entry);
  return entry.sha;
}

namespace {

const Author kAlice{"Alice Liddell", "alice@example.com"};
const Author kBob{"Bob Stone", "bob@example.com"};
const Author kBobUpper{"Bob S.", "  BOB@Example.COM "};
const Author kCarol{"Carol Finch", "carol@example.org"};
const Author kBot{"renovate[bot]", "bot@renovate.invalid"};

}  // namespace

FixtureRepo make_linear_fixture(const fs::path& dir) {
  FixtureRepo repo(dir);
  repo.write("README.md", "# demo\n");
  repo.write("app/util.py",
             "import os\n"
             "\n"
             "def total(values):\n"
             "    result = 0\n"
             "    for v in values:\n"
             "        if v > 0:\n"
             "            result += v\n"
             "    return result\n");
  repo.commit(kAlice, utc(2019, 3, 1), "util");

  repo.write("app/models.py",
             "class Base:\n"
             "    pass\n"
             "\n"
             "class User(Base):\n"
             "    def __init__(self, name, admin=False):\n"
             "        self.name = name\n"
             "        self.admin = admin\n"
             "\n"
             "    @property\n"
             "    def label(self):\n"
             "        return '%s' % self.name\n");
  repo.commit(kBob, utc(2019, 6, 10), "models");

  repo.write("app/util.py",
             "import os\n"
             "\n"
             "def total(values):\n"
             "    result = 0\n"
             "    for v in values:\n"
             "        if v > 0:\n"
             "            result += v\n"
             "    return result\n"
             "\n"
             "def squares(values):\n"
             "    return [v * v for v in values if v]\n"
             "\n"
             "key = lambda item: item[1]\n");
  repo.commit(kAlice, utc(2019, 11, 20), "squares");

  repo.write("app/meta.py",
             "class Registry(type):\n"
             "    def __new__(mcs, name, bases, ns):\n"
             "        return super().__new__(mcs, name, bases, ns)\n"
             "\n"
             "async def fetch(client, name):\n"
             "    data = await client.get(name)\n"
             "    return getattr(data, 'value', None)\n");
  repo.commit(kCarol, utc(2020, 1, 5), "meta");

  repo.write("app/models.py",
             "class Base:\n"
             "    pass\n"
             "\n"
             "class User(Base):\n"
             "    def __init__(self, name):\n"
             "        self.name = name\n"
             "\n"
             "    def tokens(self):\n"
             "        for part in self.name.split():\n"
             "            yield part\n");
  repo.commit(kBobUpper, utc(2020, 2, 14), "tokens");

  repo.write("README.md", "# demo\n\nDocs only.\n");
  repo.commit(kAlice, utc(2020, 7, 7), "docs");

  repo.write("app/util.py",
             "import os\n"
             "import sys\n"
             "\n"
             "def total(values):\n"
             "    result = 0\n"
             "    for v in values:\n"
             "        if v > 0:\n"
             "            result += v\n"
             "    return result\n"
             "\n"
             "def squares(values):\n"
             "    return [v * v for v in values if v]\n"
             "\n"
             "key = lambda item: item[1]\n");
  repo.commit(kBot, utc(2020, 8, 1), "bump");

  repo.write("app/legacy.py", "print 'hello'\nx = 1\n");
  repo.commit(kBob, utc(2021, 3, 3), "legacy");

  repo.write("app/legacy.py", "print('hello')\nx = 1\nwhile x < 3:\n    x += 1\n");
  repo.commit(kAlice, utc(2021, 4, 4), "port legacy");

  repo.write("app/blob.py", std::string("\x89PNG\r\n\x1a\n\0\0\0\rIHDR", 16));
  repo.write("app/nested.py", "grid = [[0, 1], [2, 3]]\npairs = {(a, b) for a, b in grid}\n");
  repo.commit(kCarol, utc(2021, 5, 5), "data");

  repo.remove("app/meta.py");
  repo.commit(kBob, utc(2021, 6, 6), "drop meta");
  return repo;
}

FixtureRepo make_merge_fixture(const fs::path& dir) {
  FixtureRepo repo(dir);
  repo.write("core.py",
             "def run(jobs):\n"
             "    for job in jobs:\n"
             "        job()\n");
  repo.commit(kAlice, utc(2020, 1, 10), "core");

  repo.checkout_new_branch("feature");
  repo.write("feature.py",
             "class Feature(object):\n"
             "    enabled = True\n"
             "\n"
             "    def __enter__(self):\n"
             "        return self\n"
             "\n"
             "    def __exit__(self, *exc):\n"
             "        return False\n");
  repo.commit(kBob, utc(2020, 2, 1), "feature");

  repo.checkout("main");
  repo.write("core.py",
             "def run(jobs):\n"
             "    for job in jobs:\n"
             "        try:\n"
             "            job()\n"
             "        except Exception as exc:\n"
             "            raise RuntimeError(exc)\n");
  repo.commit(kAlice, utc(2020, 2, 15), "errors");

  repo.checkout("feature");
  repo.write("feature.py",
             "class Feature(object):\n"
             "    enabled = True\n"
             "\n"
             "    def __enter__(self):\n"
             "        return self\n"
             "\n"
             "    def __exit__(self, *exc):\n"
             "        return False\n"
             "\n"
             "class Flag(Feature, dict):\n"
             "    def __get__(self, obj, owner):\n"
             "        return self.enabled if obj else None\n");
  repo.commit(kBob, utc(2020, 3, 1), "flag");

  repo.checkout("main");
  repo.merge("feature", kAlice, utc(2020, 3, 10));

  repo.checkout_new_branch("closures");
  repo.write("closures.py",
             "def counter():\n"
             "    count = 0\n"
             "    def bump():\n"
             "        nonlocal count\n"
             "        count += 1\n"
             "        return count\n"
             "    return bump\n");
  repo.commit(kCarol, utc(2020, 4, 1), "closures");

  repo.checkout("main");
  repo.write("core.py",
             "def run(jobs):\n"
             "    for job in jobs:\n"
             "        try:\n"
             "            job()\n"
             "        except Exception as exc:\n"
             "            raise RuntimeError(exc)\n"
             "\n"
             "def names(jobs):\n"
             "    return {j.__name__: j for j in jobs}\n");
  repo.commit(kAlice, utc(2020, 4, 5), "names");

  repo.merge("closures", kAlice, utc(2020, 4, 20));

  repo.write("closures.py",
             "def counter():\n"
             "    count = 0\n"
             "    def bump():\n"
             "        nonlocal count\n"
             "        count += 1\n"
             "        return count\n"
             "    return bump\n"
             "\n"
             "def chain(*parts):\n"
             "    for part in parts:\n"
             "        yield from part\n");
  repo.commit(kBob, utc(2020, 5, 1), "chain");
  return repo;
}

FixtureRepo make_rename_fixture(const fs::path& dir) {
  FixtureRepo repo(dir);
  const std::string a_text =
      "def area(w, h):\n"
      "    return w * h\n"
      "\n"
      "def perimeter(w, h):\n"
      "    return 2 * (w + h)\n"
      "\n"
      "SIZES = [(1, 2), (3, 4)]\n";
  const std::string b_text =
      "import math\n"
      "\n"
      "def hyp(a, b):\n"
      "    assert a >= 0 and b >= 0\n"
      "    return math.sqrt(a ** 2 + b ** 2)\n"
      "\n"
      "def describe(x):\n"
      "    return 'big' if x > 10 else 'small'\n";
  repo.write("pkg/a.py", a_text);
  repo.write("pkg/b.py", b_text);
  repo.write("notes.txt", "value = 1\nother = value + 1\nthird = other * 2\n");
  repo.commit(kAlice, utc(2018, 5, 1), "start");

  repo.rename("pkg/a.py", "pkg/alpha.py");
  repo.commit(kBob, utc(2018, 6, 1), "rename a");

  repo.rename("pkg/b.py", "lib/beta.py");
  repo.write("lib/beta.py", b_text + "\nHALF = [x / 2 for x in range(4)]\n");
  repo.commit(kAlice, utc(2018, 7, 1), "move b");

  repo.remove("pkg/alpha.py");
  repo.commit(kCarol, utc(2018, 8, 1), "drop alpha");

  repo.rename("notes.txt", "notes.py");
  repo.commit(kBob, utc(2018, 9, 1), "notes become code");

  repo.rename("lib/beta.py", "lib/beta.txt");
  repo.commit(kAlice, utc(2019, 1, 15), "beta to text");

  repo.write("pkg/a.py",
             "class Shape:\n"
             "    def __init__(self, *sides, **meta):\n"
             "        self.sides = sides\n"
             "        self.meta = meta\n");
  repo.commit(kBob, utc(2019, 2, 1), "re-add a");

  repo.write("pkg/a.py",
             "class Shape:\n"
             "    def __init__(self, *sides, **meta):\n"
             "        self.sides = sides\n"
             "\n"
             "with open('x') as fh:\n"
             "    data = fh.read()[1:]\n");
  repo.commit(kCarol, utc(2019, 3, 1), "shrink a");
  return repo;
}

}  // namespace cefr::testing
