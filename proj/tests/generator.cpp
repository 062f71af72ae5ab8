//===-- generator.cpp ----------------------------------------------------------===//

#include "generator.h"

#include <cassert>
#include <sstream>

namespace solar::test {

namespace {

struct Family {
  std::string base;      // declares f, poke, handle, m<i>
  std::string override_; // extends base, overrides handle (and maybe poke)
  std::string plain;     // optional second subclass, never overrides
};

class Gen {
public:
  Gen(std::mt19937_64 &rng, const GenOptions &opts) : rng_(rng), opts_(opts) {}

  GeneratedProgram run() {
    buildHierarchy();
    int scenarios = pick(3, 7);
    for (int i = 0; i < scenarios; ++i)
      emitScenario();
    return finish();
  }

private:
  std::mt19937_64 &rng_;
  GenOptions opts_;
  std::vector<Family> families_;
  std::vector<std::string> allClasses_; // user classes instantiable in main
  std::ostringstream decls_;
  std::vector<std::string> main_;
  GeneratedProgram out_;
  int tmp_ = 0;
  int unknownOrdinal_ = 0;

  int pick(int lo, int hi) {
    return (int)(rng_() % (uint64_t)(hi - lo + 1)) + lo;
  }
  bool chance(int percent) { return (int)(rng_() % 100) < percent; }
  std::string fresh(const std::string &stem) {
    return stem + std::to_string(tmp_++);
  }
  void line(const std::string &text) { main_.push_back(text); }

  /// Emits an unknown_string statement and records its site and candidates.
  std::string unknownString(std::vector<std::string> candidates) {
    std::string v = fresh("u");
    line(v + " = unknown_string;");
    out_.stringSites.push_back(
        {"Main.main/unknown_string/" + std::to_string(unknownOrdinal_++),
         std::move(candidates)});
    return v;
  }

  std::string literal(const std::string &v, const std::string &text) {
    line(v + " = \"" + text + "\";");
    return v;
  }

  void buildHierarchy() {
    decls_ << "class X {}\n";
    decls_ << "class Y extends X {}\n";
    int count = pick(2, 3);
    for (int i = 0; i < count; ++i) {
      Family fam;
      fam.base = "D" + std::to_string(i);
      fam.override_ = "B" + std::to_string(i);
      decls_ << "class " << fam.base << " {\n";
      decls_ << "  field f: X;\n";
      decls_ << "  method handle(X): void { this.f = p0; }\n";
      decls_ << "  method poke(): void { w = this.f; }\n";
      decls_ << "  method m" << i << "(X): X { ret = p0; }\n";
      decls_ << "}\n";
      decls_ << "class " << fam.override_ << " extends " << fam.base
             << " {\n";
      decls_ << "  method handle(X): void { this.f = p0; }\n";
      if (!opts_.constantOnly && chance(50))
        decls_ << "  method poke(): void {}\n";
      decls_ << "}\n";
      allClasses_.push_back(fam.base);
      allClasses_.push_back(fam.override_);
      if (chance(50)) {
        // The plain subclass never overrides anything, so lazily typed
        // receivers inferred from the base cover its dispatch too.
        fam.plain = "C" + std::to_string(i);
        decls_ << "class " << fam.plain << " extends " << fam.base << " {}\n";
        allClasses_.push_back(fam.plain);
      }
      families_.push_back(fam);
    }
    decls_ << "class Lib {\n";
    decls_ << "  static field cache: X;\n";
    decls_ << "  static method srun(X): void { Lib.cache = p0; }\n";
    if (chance(60))
      decls_ << "  static method clinit(): void { w = new Y; Lib.cache = w; "
                "}\n";
    decls_ << "}\n";
  }

  const Family &family() { return families_[rng_() % families_.size()]; }

  std::string newValue() {
    std::string v = fresh("v");
    line(v + " = new " + (chance(50) ? "X" : "Y") + ";");
    return v;
  }

  void emitScenario() {
    int which = opts_.constantOnly ? pick(0, 4) : pick(0, 11);
    switch (which) {
    case 0:
      plainCalls();
      break;
    case 1:
      constantInstantiation();
      break;
    case 2:
      constantIntrospection();
      break;
    case 3:
      constantFieldAccess();
      break;
    case 4:
      staticReflection();
      break;
    case 5:
      lazyCastChain();
      break;
    case 6:
      signatureToClass();
      break;
    case 7:
      receiverTypeInference();
      break;
    case 8:
      pluralIntrospection();
      break;
    case 9:
      unresolvedCall();
      break;
    case 10:
      fieldInferenceUnknownReceiver();
      break;
    case 11:
      fieldInferenceKnownReceiver();
      break;
    }
  }

  // Plain object-oriented code, no reflection.
  void plainCalls() {
    const Family &fam = family();
    std::string o = fresh("o");
    line(o + " = new " + (chance(50) ? fam.override_ : fam.base) + ";");
    std::string x = newValue();
    line(fresh("r") + " = " + o + ".handle(" + x + ");");
    if (chance(50))
      line(fresh("r") + " = " + o + ".poke();");
    if (chance(50)) {
      line(o + ".f = " + x + ";");
      line(fresh("w") + " = " + o + ".f;");
    }
  }

  // Constant forName, instantiation, downcast, regular use.
  void constantInstantiation() {
    const Family &fam = family();
    std::string cls = chance(50) ? fam.override_ : fam.base;
    std::string s = literal(fresh("s"), cls);
    std::string c = fresh("c");
    line(c + " = Class.forName(" + s + ");");
    std::string o = fresh("o");
    line(o + " = " + c + ".newInstance();");
    std::string a = fresh("a");
    line(a + " = (" + fam.base + ") " + o + ";");
    std::string x = newValue();
    line(fresh("r") + " = " + a + ".handle(" + x + ");");
  }

  // Constant class and member name through getMethod + invoke.
  void constantIntrospection() {
    const Family &fam = family();
    std::string cls = chance(50) ? fam.override_ : fam.base;
    std::string s = literal(fresh("s"), cls);
    std::string c = fresh("c");
    line(c + " = Class.forName(" + s + ");");
    std::string o = fresh("o");
    if (!opts_.constantOnly && chance(50)) {
      line(o + " = " + c + ".newInstance();");
    } else {
      line(o + " = new " + cls + ";");
    }
    std::string nm = literal(fresh("n"), "handle");
    std::string m = fresh("m");
    line(m + " = " + c + ".getMethod(" + nm + ");");
    std::string x = newValue();
    std::string args = fresh("g");
    line(args + " = array [" + x + "];");
    line(fresh("r") + " = (Object) " + m + ".invoke(" + o + ", " + args +
         ");");
    if (!opts_.constantOnly)
      line(fresh("a") + " = (" + fam.base + ") " + o + ";");
  }

  // Constant getField + get/set on a known receiver.
  void constantFieldAccess() {
    const Family &fam = family();
    std::string cls = chance(50) ? fam.override_ : fam.base;
    std::string s = literal(fresh("s"), cls);
    std::string c = fresh("c");
    line(c + " = Class.forName(" + s + ");");
    std::string o = fresh("o");
    line(o + " = new " + cls + ";");
    std::string nm = literal(fresh("n"), "f");
    std::string fo = fresh("fo");
    line(fo + " = " + c + ".getField(" + nm + ");");
    std::string x = newValue();
    line(fo + ".set(" + o + ", " + x + ");");
    line(fresh("r") + " = (X) " + fo + ".get(" + o + ");");
  }

  // Static field access plus a reflective static invoke with null receiver.
  void staticReflection() {
    std::string s = literal(fresh("s"), "Lib");
    std::string c = fresh("c");
    line(c + " = Class.forName(" + s + ");");
    std::string nm = literal(fresh("n"), "srun");
    std::string m = fresh("m");
    line(m + " = " + c + ".getMethod(" + nm + ");");
    std::string x = newValue();
    std::string args = fresh("g");
    line(args + " = array [" + x + "];");
    line(fresh("r") + " = (Object) " + m + ".invoke(null, " + args + ");");
    line(fresh("w") + " = Lib.cache;");
  }

  // Unknown forName, lazy instantiation, materialization at a downcast.
  void lazyCastChain() {
    const Family &fam = family();
    std::vector<std::string> candidates = {fam.base, fam.override_};
    if (!fam.plain.empty())
      candidates.push_back(fam.plain);
    std::string u = unknownString(candidates);
    std::string c = fresh("c");
    line(c + " = Class.forName(" + u + ");");
    std::string o = fresh("o");
    line(o + " = " + c + ".newInstance();");
    std::string a = fresh("a");
    line(a + " = (" + fam.base + ") " + o + ";");
    std::string x = newValue();
    line(fresh("r") + " = " + a + ".handle(" + x + ");");
    if (chance(40))
      line(fresh("r") + " = " + a + ".poke();");
  }

  // Known member name, unknown class: the hierarchy search resolves it.
  void signatureToClass() {
    std::string u = unknownString(allClasses_);
    std::string c = fresh("c");
    line(c + " = Class.forName(" + u + ");");
    std::string nm = literal(fresh("n"), "handle");
    std::string m = fresh("m");
    line(m + " = " + c + ".getMethod(" + nm + ");");
    std::string h = fresh("h");
    line(h + " = " + c + ".newInstance();");
    std::string x = newValue();
    std::string args = fresh("g");
    line(args + " = array [" + x + "];");
    line(fresh("r") + " = (Object) " + m + ".invoke(" + h + ", " + args +
         ");");
  }

  // Known receiver type refines an unknown-class method object.
  void receiverTypeInference() {
    const Family &fam = family();
    std::string recvCls = chance(50) ? fam.override_ : fam.base;
    std::string o = fresh("o");
    line(o + " = new " + recvCls + ";");
    std::string u = unknownString({recvCls});
    std::string c = fresh("c");
    line(c + " = Class.forName(" + u + ");");
    std::string un = unknownString({"poke", "handle"});
    std::string m = fresh("m");
    line(m + " = " + c + ".getMethod(" + un + ");");
    std::string args = fresh("g");
    if (chance(50)) {
      line(args + " = array [];");
    } else {
      std::string x = newValue();
      line(args + " = array [" + x + "];");
    }
    line(fresh("r") + " = (Object) " + m + ".invoke(" + o + ", " + args +
         ");");
  }

  // getMethods() feeding an invoke through the placeholder array.
  void pluralIntrospection() {
    const Family &fam = family();
    std::string cls = chance(50) ? fam.override_ : fam.base;
    std::string s = literal(fresh("s"), cls);
    std::string c = fresh("c");
    line(c + " = Class.forName(" + s + ");");
    std::string ms = fresh("ms");
    line(ms + " = " + c +
         (chance(50) ? ".getMethods();" : ".getDeclaredMethods();"));
    std::string m = fresh("m");
    line(m + " = " + ms + "[*];");
    std::string o = fresh("o");
    line(o + " = new " + cls + ";");
    std::string x = newValue();
    std::string args = fresh("g");
    line(args + " = array [" + x + "];");
    line(fresh("r") + " = (Object) " + m + ".invoke(" + o + ", " + args +
         ");");
  }

  // Unknown class, named field, lazily typed receiver: the class search and
  // receiver materialization carry the whole resolution.
  void fieldInferenceUnknownReceiver() {
    std::string u = unknownString(allClasses_);
    std::string c = fresh("c");
    line(c + " = Class.forName(" + u + ");");
    std::string nm = literal(fresh("n"), "f");
    std::string fo = fresh("fo");
    line(fo + " = " + c + ".getField(" + nm + ");");
    std::string o = fresh("o");
    line(o + " = " + c + ".newInstance();");
    std::string x = newValue();
    line(fo + ".set(" + o + ", " + x + ");");
    line(fresh("r") + " = (X) " + fo + ".get(" + o + ");");
  }

  // Unknown class but a known receiver type refines the field object.
  void fieldInferenceKnownReceiver() {
    const Family &fam = family();
    std::string recvCls = chance(50) ? fam.override_ : fam.base;
    std::string o = fresh("o");
    line(o + " = new " + recvCls + ";");
    std::string u = unknownString({recvCls});
    std::string c = fresh("c");
    line(c + " = Class.forName(" + u + ");");
    std::string un = unknownString({"f"});
    std::string fo = fresh("fo");
    line(fo + " = " + c + ".getField(" + un + ");");
    std::string x = newValue();
    line(fo + ".set(" + o + ", " + x + ");");
    line(fresh("r") + " = (X) " + fo + ".get(" + o + ");");
  }

  // Nothing to infer from: lands on the unsound list.
  void unresolvedCall() {
    std::string u1 = unknownString(allClasses_);
    std::string c1 = fresh("c");
    line(c1 + " = Class.forName(" + u1 + ");");
    std::string v = fresh("o");
    line(v + " = " + c1 + ".newInstance();");
    std::string u2 = unknownString(allClasses_);
    std::string c2 = fresh("c");
    line(c2 + " = Class.forName(" + u2 + ");");
    std::string u3 = unknownString({"poke", "handle"});
    std::string m = fresh("m");
    line(m + " = " + c2 + ".getMethod(" + u3 + ");");
    std::string args = fresh("g");
    line(args + " = unknown_array;");
    line(fresh("r") + " = (Object) " + m + ".invoke(" + v + ", " + args +
         ");");
  }

  GeneratedProgram finish() {
    std::ostringstream os;
    os << decls_.str();
    os << "class Main {\n  static method main(): void {\n";
    for (const std::string &l : main_)
      os << "    " << l << "\n";
    os << "  }\n}\n";
    out_.text = os.str();
    return std::move(out_);
  }
};

} // namespace

GeneratedProgram generateProgram(std::mt19937_64 &rng,
                                 const GenOptions &opts) {
  return Gen(rng, opts).run();
}

ConcreteEnv sampleEnv(std::mt19937_64 &rng, const GeneratedProgram &gp) {
  ConcreteEnv env;
  for (const auto &site : gp.stringSites) {
    int roll = (int)(rng() % 100);
    std::string value;
    if (roll < 90 && !site.candidates.empty())
      value = site.candidates[rng() % site.candidates.size()];
    else if (roll < 96)
      value = "X";
    else
      value = "Zzz"; // outside the closed world
    env.stringBindings[site.key] = value;
  }
  return env;
}

} // namespace solar::test
