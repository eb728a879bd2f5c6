//! Cross-checks the built-in stemmer against an independent reference
//! implementation of the same published algorithm, over a fixed English
//! vocabulary and a large set of generated pseudo-words.

use hci_core::rng::SplitMix64;
use hci_core::textprep::stem;
use rust_stemmers::{Algorithm, Stemmer};

const VOCABULARY: &str = "\
consign consigned consigning consignment consist consisted consistency consistent \
consistently consisting consists consolation consolations consolatory console consoled \
consoles consolidate consolidated consolidating consoling consolingly consols consonant \
consort consorted consorting conspicuous conspicuously conspiracy conspirator conspirators \
conspire conspired conspiring constable constables constance constancy constant knack \
knackeries knacks knag knave knaves knavish kneaded kneading knee kneel kneeled kneeling \
kneels knees knell knelt knew knick knif knife knight knightly knights knit knits knitted \
knitting knives knob knobs knock knocked knocker knockers knocking knocks knopp knot knots \
generate generates generated generating general generally generic generically generous \
generously communication communications communicate communicated communism communist \
arsenal arsenic arson early earliness earring earrings outing outings inning innings \
canning herring proceed proceeded proceeding exceed exceeding succeed succeeds succeeding \
dying lying tying skis skies sky news howe atlas cosmos bias andes ugly only singly gently \
idly crying cries cried denied denies deny dens den agreement agreements argument arguments \
argue argued argues arguing abatements abatement abate abated abates abating ability \
abilities able ably abnormal abnormally abolish abolished abolition absolute absolutely \
absorption absorb absorbed abstraction abstractions abstract abstracted accessibility \
accessible access accessed accesses accessing accident accidental accidentally accidents \
accompaniment accompany accompanied accompanying accomplishment accomplishments accomplish \
activate activated activates activating activation active actively activeness activities \
activity actual actuality actually addition additional additionally additions adequacy \
adequate adequately adjustable adjustment adjustments adjust adjusted adjusting \
administration administrative admiration admire admired admiring adoption adopt adopted \
advertisement advertisements advertise advertised advertising advisable advise advised \
adviser advisory affectation affected affecting affection affectingly agreeable agreed \
agree agreeing allowance allowances allow allowed allowing amazement amaze amazed amazing \
amusement amusements amuse amused amusing analogous analogously analysis analyses analyse \
analysed analyzing angularity angularities appreciation appreciate appreciated apprehension \
approximation approximate approximately argumentation arrangement arrangements arrange \
arranged arranging association associations associate associated associating assumption \
assumptions assume assumed assuming attention attentions attentive attentively \
authorization authorize authorized availability available babbled babble babbles baby \
babies capability capabilities capable carefully careful carelessness careless caress \
caresses caressed caressing categorical categories category cease ceased ceases ceasing \
celebration celebrations celebrate celebrated certainly certainty characteristically \
characterization characterize charitable charity cheerfulness cheerful circumstantial \
civilization classification classifications classified classify collectively collection \
combination combinations combine combined combining comfortably comfortable commendable \
communicative comparatively comparative comparison comparisons compare compared comparing \
compilation complication complications complicate complicated composition compositions \
comprehensibility comprehension computational computation computations compute computed \
computer computers computing conceivable concentration conceptualization condition \
conditional conditionally conditioned conditioner conditions confusedly confusion \
confusing congratulations connection connections connective consciousness conscious \
consideration considerations considerable considerably consider considered considering \
hopeful hopefulness hopefully hope hoped hopes hoping hopped hopping hop hops horrible \
horribly possible possibly probable probably rationalization rationalizations rationalize \
rational rationally nationality nationalities national nationally naturalization \
sensational sensation sensibility sensible sensibly sensitivity sensitive sensitiveness \
traditionally traditional tradition vietnamization visualization utilization tribulation \
restoration restorative privatization personalization organizational organization \
optimization normalization modernization maximization localization liberalization \
legalization internationalization initialization industrialization immunization \
idealization hospitalization globalization formalization federalization dramatization \
digitization decentralization crystallization criminalization centralization \
capitalization authorization fertilization stabilization sterilization standardization \
specialization synchronization systematization visualize utilize tribulate restorate \
electricity electrical electric elasticity duplicity duplicitous complicity simplicity \
multiplicity authenticity publicity toxicity scarcity audacity capacity opacity tenacity \
velocity veracity vivacity voracity feudalism feudal fatalism fatalistic favoritism \
federalism formalism fundamentalism liberalism materialism nationalism naturalism \
decisiveness decisive decision decided decide decides deciding defensible defensibility \
defensive defender defended defending dependent dependence dependency depended depending \
hesitancy hesitance hesitant hesitated hesitating valency valence valiant radically \
radical digitizer digitize vileness vile vilely differently different difference differ \
differed differing conformably conformable conform conformed conforming bowdlerize \
bowdlerized effectively effective effect effected homologous homolog analogies analogy \
luxuriate luxuriated luxuriating luxuriant controllable controlled controller controlling \
control controls rolled roller rolling roll rolls fizzed fizzing fizz fizzes failed \
failing fail fails filed filing file files fitted fitting fit fits crime crimes criminal \
criminally bite bites biting bitten embedded embedding embed embeds feed feeds feeding \
fed freed freeing free frees trees tree treed woolly wool yearly yearn yearning yearnings \
youthful youthfully youth employ employer employee employment employed employing enjoy \
enjoyable enjoyment enjoyed enjoying obey obeyed obeying stay stayed staying spray sprayed \
stray strayed pray prayed prayer praying prey preyed key keyed keys monkey monkeys donkey \
donkeys journey journeys valley valleys alley alleys attorney attorneys chimney chimneys \
medley medleys parley parleys trolley trolleys volley volleys delay delayed delays essay \
essays betray betrayal betrayed buy buys buyer buying dye dyed dyeing dyes eye eyed eyeing \
eyes lye rye tie tied ties tying die died dies vie vied vies was what when where which \
while who whom why will with within without would write writes writing written wrote yes \
yet you your yours yourself apples apple application applications applied applies apply \
applying appointment appointments appoint appointed appointing battery batteries battle \
battles bottle bottles bubble bubbles bugs bug buggy bugginess crashes crash crashed \
crashing updates update updated updating upgrade upgraded upgrades upgrading installs \
install installed installing installation installer uninstall uninstalled notification \
notifications notify notified notifies notifying synchronizes synchronized synchronizing \
permissions permission password passwords username usernames login logins logged logging \
settings setting screens screen screenshot screenshots buttons button menus menu scrolling \
scrolled scrolls scroll swipe swiped swiping taps tapped tapping slowness slowly slow \
slower slowest fastness faster fastest quickly quicker responsiveness responsive respond \
responded responding freezes froze frozen freezing lagging lagged lags lag drains drained \
draining drain overheats overheated overheating reboot rebooted rebooting restarts \
restarted restarting";

fn check(word: &str, oracle: &Stemmer) {
    let expected = oracle.stem(word);
    let got = stem(word);
    assert_eq!(
        got, expected,
        "stem mismatch for {word:?}: got {got:?}, reference {expected:?}"
    );
}

#[test]
fn matches_reference_on_english_vocabulary() {
    let oracle = Stemmer::create(Algorithm::English);
    for word in VOCABULARY.split_whitespace() {
        check(word, &oracle);
    }
}

#[test]
fn matches_reference_on_generated_words() {
    let oracle = Stemmer::create(Algorithm::English);
    let letters = b"abcdefghijklmnopqrstuvwxyz";
    let vowels = b"aeiouy";
    let suffixes = [
        "", "s", "es", "ies", "ied", "ed", "ing", "ingly", "edly", "eed", "eedly", "ly",
        "li", "ogi", "sses", "ational", "tional", "ation", "ator", "alism", "aliti",
        "iviti", "biliti", "fulness", "ousness", "iveness", "ization", "izer", "enci",
        "anci", "abli", "alli", "entli", "eli", "ousli", "fulli", "lessli", "icate",
        "ative", "alize", "iciti", "ical", "ful", "ness", "ance", "ence", "ement", "ment",
        "ent", "ion", "ism", "ate", "iti", "ous", "ive", "ize", "al", "er", "ic", "able",
        "ible", "ant", "e", "l", "ll", "y", "ey", "'s", "'s'", "'",
    ];
    let mut rng = SplitMix64::new(2024);
    for _ in 0..20_000 {
        let stem_len = 1 + rng.bounded(7) as usize;
        let mut word = String::new();
        for i in 0..stem_len {
            // Alternate consonant-ish and vowel-ish draws so regions vary.
            let pool: &[u8] = if i % 2 == rng.bounded(2) as usize % 2 {
                vowels
            } else {
                letters
            };
            word.push(pool[rng.bounded(pool.len() as u64) as usize] as char);
        }
        let suffix = suffixes[rng.bounded(suffixes.len() as u64) as usize];
        word.push_str(suffix);
        check(&word, &oracle);
    }
}
