#include "avf/dgrad.hpp"

#include <stdexcept>
#include <string>

namespace avf {
namespace {

// Gauss-Legendre nodes and weights on [0, 1], 25 significant digits.
constexpr double kNodes2[] = {
    0.2113248654051871177454256,
    0.7886751345948128822545744,
};
constexpr double kWeights2[] = {
    0.5000000000000000000000000,
    0.5000000000000000000000000,
};

constexpr double kNodes3[] = {
    0.1127016653792583114820735,
    0.5000000000000000000000000,
    0.8872983346207416885179265,
};
constexpr double kWeights3[] = {
    0.2777777777777777777777778,
    0.4444444444444444444444444,
    0.2777777777777777777777778,
};

constexpr double kNodes4[] = {
    0.06943184420297371238802676,
    0.3300094782075718675986671,
    0.6699905217924281324013329,
    0.9305681557970262876119732,
};
constexpr double kWeights4[] = {
    0.1739274225687269286865320,
    0.3260725774312730713134680,
    0.3260725774312730713134680,
    0.1739274225687269286865320,
};

constexpr double kNodes5[] = {
    0.04691007703066800360118656,
    0.2307653449471584544818428,
    0.5000000000000000000000000,
    0.7692346550528415455181572,
    0.9530899229693319963988134,
};
constexpr double kWeights5[] = {
    0.1184634425280945437571320,
    0.2393143352496832340206458,
    0.2844444444444444444444444,
    0.2393143352496832340206458,
    0.1184634425280945437571320,
};

constexpr double kNodes6[] = {
    0.03376524289842398609384922,
    0.1693953067668677431693002,
    0.3806904069584015456847491,
    0.6193095930415984543152509,
    0.8306046932331322568306998,
    0.9662347571015760139061508,
};
constexpr double kWeights6[] = {
    0.08566224618958517252014807,
    0.1803807865240693037849168,
    0.2339569672863455236949352,
    0.2339569672863455236949352,
    0.1803807865240693037849168,
    0.08566224618958517252014807,
};

constexpr double kNodes7[] = {
    0.02544604382862073773690516,
    0.1292344072003027800680676,
    0.2970774243113014165466968,
    0.5000000000000000000000000,
    0.7029225756886985834533032,
    0.8707655927996972199319324,
    0.9745539561713792622630948,
};
constexpr double kWeights7[] = {
    0.06474248308443484663530572,
    0.1398526957446383339507339,
    0.1909150252525594724751849,
    0.2089795918367346938775510,
    0.1909150252525594724751849,
    0.1398526957446383339507339,
    0.06474248308443484663530572,
};

constexpr double kNodes8[] = {
    0.01985507175123188415821957,
    0.1016667612931866302042230,
    0.2372337950418355070911305,
    0.4082826787521750975302619,
    0.5917173212478249024697381,
    0.7627662049581644929088695,
    0.8983332387068133697957770,
    0.9801449282487681158417804,
};
constexpr double kWeights8[] = {
    0.05061426814518812957626568,
    0.1111905172266872352721780,
    0.1568533229389436436689811,
    0.1813418916891809914825752,
    0.1813418916891809914825752,
    0.1568533229389436436689811,
    0.1111905172266872352721780,
    0.05061426814518812957626568,
};

constexpr double kNodes9[] = {
    0.01591988024618695508221190,
    0.08198444633668210285028511,
    0.1933142836497048013456490,
    0.3378732882980955354807310,
    0.5000000000000000000000000,
    0.6621267117019044645192690,
    0.8066857163502951986543510,
    0.9180155536633178971497149,
    0.9840801197538130449177881,
};
constexpr double kWeights9[] = {
    0.04063719418078720598594608,
    0.09032408034742870202923602,
    0.1303053482014677311593714,
    0.1561735385200014200343152,
    0.1651196775006298815822625,
    0.1561735385200014200343152,
    0.1303053482014677311593714,
    0.09032408034742870202923602,
    0.04063719418078720598594608,
};

constexpr double kNodes10[] = {
    0.01304673574141413996101799,
    0.06746831665550774463395166,
    0.1602952158504877968828363,
    0.2833023029353764046003670,
    0.4255628305091843945575870,
    0.5744371694908156054424130,
    0.7166976970646235953996330,
    0.8397047841495122031171637,
    0.9325316833444922553660483,
    0.9869532642585858600389820,
};
constexpr double kWeights10[] = {
    0.03333567215434406879678440,
    0.07472567457529029657288817,
    0.1095431812579910219977675,
    0.1346333596549981775456135,
    0.1477621123573764350869465,
    0.1477621123573764350869465,
    0.1346333596549981775456135,
    0.1095431812579910219977675,
    0.07472567457529029657288817,
    0.03333567215434406879678440,
};

constexpr double kNodes11[] = {
    0.01088567092697150359803100,
    0.05646870011595235046242112,
    0.1349239972129753379532919,
    0.2404519353965940920371372,
    0.3652284220238275138342340,
    0.5000000000000000000000000,
    0.6347715779761724861657660,
    0.7595480646034059079628628,
    0.8650760027870246620467081,
    0.9435312998840476495375789,
    0.9891143290730284964019690,
};
constexpr double kWeights11[] = {
    0.02783428355808683324137686,
    0.06279018473245231231734715,
    0.09314510546386712571304882,
    0.1165968822959952399592619,
    0.1314022722551233310903444,
    0.1364625433889503153572418,
    0.1314022722551233310903444,
    0.1165968822959952399592619,
    0.09314510546386712571304882,
    0.06279018473245231231734715,
    0.02783428355808683324137686,
};

constexpr double kNodes12[] = {
    0.009219682876640374654725455,
    0.04794137181476257166076707,
    0.1150486629028476564815531,
    0.2063410228566912763516488,
    0.3160842505009099031236542,
    0.4373832957442655422637793,
    0.5626167042557344577362207,
    0.6839157494990900968763458,
    0.7936589771433087236483512,
    0.8849513370971523435184469,
    0.9520586281852374283392329,
    0.9907803171233596253452745,
};
constexpr double kWeights12[] = {
    0.02358766819325591359730798,
    0.05346966299765921548012736,
    0.08003916427167311316732626,
    0.1015837133615329608745322,
    0.1167462682691774043804249,
    0.1245735229067013925002812,
    0.1245735229067013925002812,
    0.1167462682691774043804249,
    0.1015837133615329608745322,
    0.08003916427167311316732626,
    0.05346966299765921548012736,
    0.02358766819325591359730798,
};

constexpr double kNodes13[] = {
    0.007908472640705925263585276,
    0.04120080038851101739672608,
    0.09921095463334504360289676,
    0.1788253302798298896780077,
    0.2757536244817765735610436,
    0.3847708420224326029672359,
    0.5000000000000000000000000,
    0.6152291579775673970327641,
    0.7242463755182234264389564,
    0.8211746697201701103219923,
    0.9007890453666549563971032,
    0.9587991996114889826032739,
    0.9920915273592940747364147,
};
constexpr double kWeights13[] = {
    0.02024200238265793976001080,
    0.04606074991886422395721089,
    0.06943675510989361923180089,
    0.08907299038097286914002335,
    0.1039080237684442511562616,
    0.1131415901314486192060451,
    0.1162757766154369550972948,
    0.1131415901314486192060451,
    0.1039080237684442511562616,
    0.08907299038097286914002335,
    0.06943675510989361923180089,
    0.04606074991886422395721089,
    0.02024200238265793976001080,
};

constexpr double kNodes14[] = {
    0.006858095651593830579201367,
    0.03578255816821324133180443,
    0.08639934246511750340510263,
    0.1563535475941572649259901,
    0.2423756818209229540173546,
    0.3404438155360551197821641,
    0.4459725256463281689668777,
    0.5540274743536718310331223,
    0.6595561844639448802178359,
    0.7576243181790770459826454,
    0.8436464524058427350740099,
    0.9136006575348824965948974,
    0.9642174418317867586681956,
    0.9931419043484061694207986,
};
constexpr double kWeights14[] = {
    0.01755973016587593151591644,
    0.04007904357988010490281664,
    0.06075928534395159234470740,
    0.07860158357909676728480097,
    0.09276919873896890687085830,
    0.1025992318606478019829620,
    0.1076319267315788950979382,
    0.1076319267315788950979382,
    0.1025992318606478019829620,
    0.09276919873896890687085830,
    0.07860158357909676728480097,
    0.06075928534395159234470740,
    0.04007904357988010490281664,
    0.01755973016587593151591644,
};

constexpr double kNodes15[] = {
    0.006003740989757285755217141,
    0.03136330379964704784612053,
    0.07589670829478639189967584,
    0.1377911343199149762919070,
    0.2145139136957305762313866,
    0.3029243264612183150513963,
    0.3994029530012827388496858,
    0.5000000000000000000000000,
    0.6005970469987172611503142,
    0.6970756735387816849486037,
    0.7854860863042694237686134,
    0.8622088656800850237080930,
    0.9241032917052136081003242,
    0.9686366962003529521538795,
    0.9939962590102427142447829,
};
constexpr double kWeights15[] = {
    0.01537662099805863417731420,
    0.03518302374405406235463371,
    0.05357961023358596750593477,
    0.06978533896307715722390240,
    0.08313460290849696677660043,
    0.09308050000778110551340028,
    0.09921574266355578822805916,
    0.1012891209627806364403101,
    0.09921574266355578822805916,
    0.09308050000778110551340028,
    0.08313460290849696677660043,
    0.06978533896307715722390240,
    0.05357961023358596750593477,
    0.03518302374405406235463371,
    0.01537662099805863417731420,
};

constexpr double kNodes16[] = {
    0.005299532504175033701922913,
    0.02771248846338371196100579,
    0.06718439880608412805976605,
    0.1222977958224984830524494,
    0.1910618777986781257766641,
    0.2709916111713863068287903,
    0.3591982246103705433847697,
    0.4524937450811812799073403,
    0.5475062549188187200926597,
    0.6408017753896294566152303,
    0.7290083888286136931712097,
    0.8089381222013218742233359,
    0.8777022041775015169475506,
    0.9328156011939158719402339,
    0.9722875115366162880389942,
    0.9947004674958249662980771,
};
constexpr double kWeights16[] = {
    0.01357622970587704742589029,
    0.03112676196932394643142192,
    0.04757925584124639240496255,
    0.06231448562776693602623814,
    0.07479799440828836604075087,
    0.08457825969750126909465604,
    0.09130170752246179443338183,
    0.09472530522753424814269836,
    0.09472530522753424814269836,
    0.09130170752246179443338183,
    0.08457825969750126909465604,
    0.07479799440828836604075087,
    0.06231448562776693602623814,
    0.04757925584124639240496255,
    0.03112676196932394643142192,
    0.01357622970587704742589029,
};

constexpr double kNodes24[] = {
    0.002406390001489319910001295,
    0.01263572201434525090080400,
    0.03086272399863362073817550,
    0.05679223649779948289342283,
    0.08999900701304853902302506,
    0.1299379042107228178780859,
    0.1759531740315122153737521,
    0.2272892643055802321708122,
    0.2831032461869774307564579,
    0.3424786601519183128066034,
    0.4044405662631918454206801,
    0.4679715535686971869574785,
    0.5320284464313028130425215,
    0.5955594337368081545793199,
    0.6575213398480816871933966,
    0.7168967538130225692435421,
    0.7727107356944197678291878,
    0.8240468259684877846262479,
    0.8700620957892771821219141,
    0.9100009929869514609769749,
    0.9432077635022005171065772,
    0.9691372760013663792618245,
    0.9873642779856547490991960,
    0.9975936099985106800899987,
};
constexpr double kWeights24[] = {
    0.006170614899993599773402834,
    0.01426569431446683159065391,
    0.02213871940870990308430137,
    0.02964929245771839037318388,
    0.03667324070554015286701681,
    0.04309508076597663795859260,
    0.04880932605205694413494033,
    0.05372213505798281739128867,
    0.05775283402686280067667224,
    0.06083523646390169560223158,
    0.06291872817341414806068769,
    0.06396909767337607848702808,
    0.06396909767337607848702808,
    0.06291872817341414806068769,
    0.06083523646390169560223158,
    0.05775283402686280067667224,
    0.05372213505798281739128867,
    0.04880932605205694413494033,
    0.04309508076597663795859260,
    0.03667324070554015286701681,
    0.02964929245771839037318388,
    0.02213871940870990308430137,
    0.01426569431446683159065391,
    0.006170614899993599773402834,
};

constexpr double kNodes32[] = {
    0.001368069075259218227509436,
    0.007194244227365832299912478,
    0.01761887220624678461309404,
    0.03254696203113015541454043,
    0.05183942211697393801734638,
    0.07531619313371501493315350,
    0.1027581020160287965184514,
    0.1339089406298551598062867,
    0.1684778665348923995124424,
    0.2061421213796188354796273,
    0.2465500455338853049881263,
    0.2893243619346823273179403,
    0.3340656988589361751100416,
    0.3803563188739314627276984,
    0.4277640192086017532574068,
    0.4758461671561308418825937,
    0.5241538328438691581174063,
    0.5722359807913982467425932,
    0.6196436811260685372723016,
    0.6659343011410638248899584,
    0.7106756380653176726820597,
    0.7534499544661146950118737,
    0.7938578786203811645203727,
    0.8315221334651076004875576,
    0.8660910593701448401937133,
    0.8972418979839712034815486,
    0.9246838068662849850668465,
    0.9481605778830260619826536,
    0.9674530379688698445854596,
    0.9823811277937532153869060,
    0.9928057557726341677000875,
    0.9986319309247407817724906,
};
constexpr double kWeights32[] = {
    0.003509305004735048300203532,
    0.008137197365452835302585281,
    0.01269603265463102972787629,
    0.01713693145651071655134387,
    0.02141794901111334032843932,
    0.02549902963118808809808162,
    0.02934204673926777357264182,
    0.03291111138818092341882503,
    0.03617289705442425311269968,
    0.03909694789353515323587046,
    0.04165596211347337761109954,
    0.04382604650220190557138573,
    0.04558693934788194235643429,
    0.04692219954040228281959012,
    0.04781936003963742970954100,
    0.04827004425736390028338242,
    0.04827004425736390028338242,
    0.04781936003963742970954100,
    0.04692219954040228281959012,
    0.04558693934788194235643429,
    0.04382604650220190557138573,
    0.04165596211347337761109954,
    0.03909694789353515323587046,
    0.03617289705442425311269968,
    0.03291111138818092341882503,
    0.02934204673926777357264182,
    0.02549902963118808809808162,
    0.02141794901111334032843932,
    0.01713693145651071655134387,
    0.01269603265463102972787629,
    0.008137197365452835302585281,
    0.003509305004735048300203532,
};

constexpr double kNodes48[] = {
    0.0006144963737869406997292542,
    0.003234913866824621226035625,
    0.007937708138586571127708200,
    0.01470420372687637476929401,
    0.02350614841978456963851967,
    0.03430665464672283344291281,
    0.04706043164221516358896258,
    0.06171398986287605704715322,
    0.07820586918780323464445508,
    0.09646689798527868645872348,
    0.1164204837421298303730723,
    0.1379829345380926726627589,
    0.1610638101836680473940744,
    0.1855663016117431880024175,
    0.2113876369580136480910954,
    0.2384195126388834831608871,
    0.2665485476245207977275356,
    0.2956567590046416350418873,
    0.3256220568539196309200910,
    0.3563187563222722116320568,
    0.3876181048026554693875673,
    0.4193888219655541409717813,
    0.4514976503952686505349730,
    0.4838099145185653189833389,
    0.5161900854814346810166611,
    0.5485023496047313494650270,
    0.5806111780344458590282187,
    0.6123818951973445306124327,
    0.6436812436777277883679432,
    0.6743779431460803690799090,
    0.7043432409953583649581127,
    0.7334514523754792022724644,
    0.7615804873611165168391129,
    0.7886123630419863519089046,
    0.8144336983882568119975825,
    0.8389361898163319526059256,
    0.8620170654619073273372411,
    0.8835795162578701696269277,
    0.9035331020147213135412765,
    0.9217941308121967653555449,
    0.9382860101371239429528468,
    0.9529395683577848364110374,
    0.9656933453532771665570872,
    0.9764938515802154303614803,
    0.9852957962731236252307060,
    0.9920622918614134288722918,
    0.9967650861331753787739644,
    0.9993855036262130593002707,
};
constexpr double kWeights48[] = {
    0.001576673026152919316338656,
    0.003663776950638131051191990,
    0.005738617289617269744796334,
    0.007789657861471924364088478,
    0.009808080228677763907230360,
    0.01178538041966218957025965,
    0.01371325485417847410003692,
    0.01558361391639904445103288,
    0.01738861128238521944627429,
    0.01912067553291535315860863,
    0.02077254147173237460702941,
    0.02233728042834714020972429,
    0.02380832924624523741295331,
    0.02517951777692723747890381,
    0.02644509474259683354775253,
    0.02759975184999208143410175,
    0.02863864605020160785257512,
    0.02955741984919781787323741,
    0.03035221958294694002648462,
    0.03101971157994633195209889,
    0.03155709614312701282856301,
    0.03196211929232409331195310,
    0.03223308221797504110325210,
    0.03236884840634196125151247,
    0.03236884840634196125151247,
    0.03223308221797504110325210,
    0.03196211929232409331195310,
    0.03155709614312701282856301,
    0.03101971157994633195209889,
    0.03035221958294694002648462,
    0.02955741984919781787323741,
    0.02863864605020160785257512,
    0.02759975184999208143410175,
    0.02644509474259683354775253,
    0.02517951777692723747890381,
    0.02380832924624523741295331,
    0.02233728042834714020972429,
    0.02077254147173237460702941,
    0.01912067553291535315860863,
    0.01738861128238521944627429,
    0.01558361391639904445103288,
    0.01371325485417847410003692,
    0.01178538041966218957025965,
    0.009808080228677763907230360,
    0.007789657861471924364088478,
    0.005738617289617269744796334,
    0.003663776950638131051191990,
    0.001576673026152919316338656,
};

constexpr double kNodes64[] = {
    0.0003474791321139302715471878,
    0.001829941614022360326537750,
    0.004493314261627839630308808,
    0.008331873057687021534350349,
    0.01333658610504451812907325,
    0.01949560017397314054069294,
    0.02679431257079859196875925,
    0.03521541393403021208925492,
    0.04473893146074859712180967,
    0.05534227700244294707329798,
    0.06700030092295359011960831,
    0.07968535187370981862415423,
    0.09336734243860122012903833,
    0.1080138205283292961948897,
    0.1235900463697340516940681,
    0.1400590749141945865755299,
    0.1573818434728833787182208,
    0.1755172643726713300711194,
    0.1944223224138033748755735,
    0.2140521768986829828580609,
    0.2343602679900527271709930,
    0.2552984271464735212607368,
    0.2768169913732679560075261,
    0.2988649210180041981521166,
    0.3213899208311659420247787,
    0.3443385640048945219212437,
    0.3676564188956162918130179,
    0.3912881781299964579251756,
    0.4151777897880035909813432,
    0.4392685903519397227648118,
    0.4635034391061004802752285,
    0.4878248536682877837455221,
    0.5121751463317122162544779,
    0.5364965608938995197247715,
    0.5607314096480602772351882,
    0.5848222102119964090186568,
    0.6087118218700035420748244,
    0.6323435811043837081869821,
    0.6556614359951054780787563,
    0.6786100791688340579752213,
    0.7011350789819958018478834,
    0.7231830086267320439924739,
    0.7447015728535264787392632,
    0.7656397320099472728290070,
    0.7859478231013170171419391,
    0.8055776775861966251244265,
    0.8244827356273286699288806,
    0.8426181565271166212817792,
    0.8599409250858054134244701,
    0.8764099536302659483059319,
    0.8919861794716707038051103,
    0.9066326575613987798709617,
    0.9203146481262901813758458,
    0.9329996990770464098803917,
    0.9446577229975570529267020,
    0.9552610685392514028781903,
    0.9647845860659697879107451,
    0.9732056874292014080312407,
    0.9805043998260268594593071,
    0.9866634138949554818709268,
    0.9916681269423129784656497,
    0.9955066857383721603696912,
    0.9981700583859776396734623,
    0.9996525208678860697284528,
};
constexpr double kWeights64[] = {
    0.0008916403608482164736480396,
    0.002073516630281233817643768,
    0.003252228984489181428058680,
    0.004423379913181973861515457,
    0.005584069730065564409295247,
    0.006731523948359321299030383,
    0.007863015238012359660982998,
    0.008975857887848671542522651,
    0.01006741157676510468617016,
    0.01113508690419162707964917,
    0.01217635128435543666908878,
    0.01318873485752732933584590,
    0.01416983630712974161375565,
    0.01511732853620123943398703,
    0.01602896417742577679273375,
    0.01690258091857080469578274,
    0.01773610662844119190534657,
    0.01852756427012002302020755,
    0.01927507658930781456448125,
    0.01997687056636017069332846,
    0.02063128162131176430507815,
    0.02123675756182679450366988,
    0.02179186226466172668841393,
    0.02229527908187828153006736,
    0.02274581396370907223988550,
    0.02314239829065720864797662,
    0.02348409140810500866266314,
    0.02377008285741515433114110,
    0.02399969429822915386406309,
    0.02417238111740147858488476,
    0.02428773372075171346739953,
    0.02434547850456986019168270,
    0.02434547850456986019168270,
    0.02428773372075171346739953,
    0.02417238111740147858488476,
    0.02399969429822915386406309,
    0.02377008285741515433114110,
    0.02348409140810500866266314,
    0.02314239829065720864797662,
    0.02274581396370907223988550,
    0.02229527908187828153006736,
    0.02179186226466172668841393,
    0.02123675756182679450366988,
    0.02063128162131176430507815,
    0.01997687056636017069332846,
    0.01927507658930781456448125,
    0.01852756427012002302020755,
    0.01773610662844119190534657,
    0.01690258091857080469578274,
    0.01602896417742577679273375,
    0.01511732853620123943398703,
    0.01416983630712974161375565,
    0.01318873485752732933584590,
    0.01217635128435543666908878,
    0.01113508690419162707964917,
    0.01006741157676510468617016,
    0.008975857887848671542522651,
    0.007863015238012359660982998,
    0.006731523948359321299030383,
    0.005584069730065564409295247,
    0.004423379913181973861515457,
    0.003252228984489181428058680,
    0.002073516630281233817643768,
    0.0008916403608482164736480396,
};

struct Rule {
    int count;
    const double* nodes;
    const double* weights;
};

constexpr Rule kRules[] = {
    {2, kNodes2, kWeights2},
    {3, kNodes3, kWeights3},
    {4, kNodes4, kWeights4},
    {5, kNodes5, kWeights5},
    {6, kNodes6, kWeights6},
    {7, kNodes7, kWeights7},
    {8, kNodes8, kWeights8},
    {9, kNodes9, kWeights9},
    {10, kNodes10, kWeights10},
    {11, kNodes11, kWeights11},
    {12, kNodes12, kWeights12},
    {13, kNodes13, kWeights13},
    {14, kNodes14, kWeights14},
    {15, kNodes15, kWeights15},
    {16, kNodes16, kWeights16},
    {24, kNodes24, kWeights24},
    {32, kNodes32, kWeights32},
    {48, kNodes48, kWeights48},
    {64, kNodes64, kWeights64},
};

}  // namespace

const std::vector<int>& gauss_legendre_tabulated_counts() {
    static const std::vector<int> counts = {
        2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 24, 32, 48, 64
    };
    return counts;
}

GaussLegendreRule gauss_legendre_rule(int node_count) {
    for (const Rule& r : kRules) {
        if (r.count == node_count) {
            return GaussLegendreRule{std::span(r.nodes, static_cast<std::size_t>(r.count)),
                                     std::span(r.weights, static_cast<std::size_t>(r.count))};
        }
    }
    throw std::invalid_argument("gauss_legendre_rule: node count " + std::to_string(node_count) +
                                " is not tabulated (valid: 2..16, 24, 32, 48, 64)");
}

}  // namespace avf
