"""Regenerates the fixture dictionaries and corpora. Deterministic."""
import random, os
R = random.Random(20240)
root = os.path.dirname(os.path.abspath(__file__))

EN = dict(
  noun=['cat','dog','house','city','book','friend','school','park','street','car','train','river','garden','window','table','chair','kitchen','song','teacher','student','letter','market','bridge','world','morning','evening'],
  verb=['walk','talk','play','work','look','like','love','want','live','cook','open','help','visit','paint','watch','clean'],
  adj=['good','new','old','big','small','happy','beautiful','quiet','green','red','blue','warm','cold','long','short','nice'],
  time=['today','tomorrow','yesterday','now','always','sometimes','every day','in the morning','at night','after school'],
  subj=['I','we','you','they'],
  poss=['my','your','our','their'],
  prep=['in','near','behind','from','to'],
  other=['the','a','an','is','are','was','be','this','that','it','on','of','and','for','with','very','much','thanks','please','where','what','how','when','who','there','here','people','family','water','food','weather','music','coffee','tea','milk','bread','he','she','his','her','not','but','or','at','by','about','after','before','will','can','do','does','did','hello','have','has','night','day','week','year','every','all','some','many','because','school','every'],
)
ES = dict(
  noun=['gato','perro','casa','ciudad','libro','amigo','escuela','parque','calle','coche','tren','río','jardín','ventana','mesa','silla','cocina','canción','maestro','mercado','puente','mundo','mañana','noche','flor','pez','camino','tienda','playa','montaña'],
  verb_ar=['caminar','hablar','trabajar','mirar','cantar','estudiar','cocinar','pintar','visitar','limpiar','buscar','comprar'],
  verb_er=['comer','beber','leer','correr','vender','aprender'],
  adj=['bueno','nuevo','viejo','grande','pequeño','bonito','tranquilo','rojo','largo','corto','caliente','feliz'],
  time=['hoy','mañana','ayer','ahora','siempre','todos los días','por la tarde','por la noche','después de clase'],
  other=['el','la','los','las','un','una','es','son','está','están','muy','bien','gracias','por','favor','que','de','del','en','con','para','y','pero','no','sí','yo','tú','él','ella','nosotros','ellos','mi','tu','su','nuestro','nuestra','hola','agua','comida','tiempo','hace','calor','frío','familia','gente','música','café','leche','pan','aquí','allí','cuando','donde','cómo','qué','porque','todos','días','tarde','clase','después','hoy','azul','verde','mucho','mucha','siempre','nunca','sol','lluvia','buenos','buenas','al','cerca','lejos','detrás','desde','hasta'],
)
GL = dict(
  noun=['can','xente','cidade','neno','nena','rapaz','xanela','cadeira','cociña','praia','rúa','monte','festa','leira','fiestra','lareira','aldea','camiño','igrexa','porto'],
  verb_ar=['falar','traballar','camiñar','estudar','xogar','choutar','bailar','agardar','soñar','mollar'],
  adj=['fermoso','pequeno','vello','novo','vermello','escuro','quente','longo','ledo','doado'],
  time=['hoxe','onte','agora','sempre','pola mañá','pola noite','cada día','á tardiña'],
  other=['o','os','unha','unhas','moito','moita','grazas','eu','ti','ela','nós','eles','elas','meu','teu','seu','noso','nosa','moi','ben','tamén','coa','co','na','nun','nunha','dunha','dun','do','da','das','e','ou','mais','non','ten','teño','imos','vou','quero','pode','leite','auga','tempo','hoxe','mañá','onte','agora','alí','onde','cando','xa','aínda','sempre','ola','bo','bos','boas','día','pola','noite','cada','tardiña','á','ao','preto','lonxe','dende','ata','chuvia','inverno','verán','mar','eiquí','velaquí'],
)

def en_sentence():
    n = R.choice; nn = EN['noun']; v = EN['verb']; a = EN['adj']
    def pl(x):
        if x.endswith(('s','x','z','h')): return x+'es'
        if x.endswith('y') and x[-2] not in 'aeiou': return x[:-1]+'ies'
        return x+'s'
    def past(x):
        if x.endswith('e'): return x+'d'
        return x+'ed'
    def ing(x):
        if x.endswith('e'): return x[:-1]+'ing'
        return x+'ing'
    t = R.randrange(8)
    if t == 0: s = f"the {n(a)} {n(nn)} is {n(EN['prep'])} the {n(nn)}"
    elif t == 1: s = f"{n(EN['subj'])} {n(v)} the {n(a)} {pl(n(nn))} {n(EN['time'])}"
    elif t == 2: s = f"{n(EN['poss'])} {n(nn)} {past(n(v))} {n(EN['time'])}"
    elif t == 3: s = f"{n(EN['subj'])} are {ing(n(v))} {n(EN['prep'])} the {n(nn)}"
    elif t == 4: s = f"the weather is {n(a)} and {n(a)} {n(EN['time'])}"
    elif t == 5: s = f"where is {n(EN['poss'])} {n(a)} {n(nn)}"
    elif t == 6: s = f"{n(EN['subj'])} did not {n(v)} the {n(nn)} because it was {n(a)}"
    else: s = f"hello, how are you {n(EN['time'])}"
    return s[0].upper()+s[1:] + R.choice(['.', '.', '!', '?', ''])

def es_sentence(words=ES):
    n = R.choice; nn = ES['noun']; a = ES['adj']
    def pl(x):
        if x.endswith('ón'): return x[:-2]+'ones'
        if x.endswith('z'): return x[:-1]+'ces'
        if x[-1] in 'aeioué': return x+'s'
        return x+'es'
    def conj(v):
        if v.endswith('ar'): return v[:-2]+R.choice(['o','as','a','amos','an'])
        return v[:-2]+R.choice(['o','es','e','emos','en'])
    verbs = ES['verb_ar']+ES['verb_er']
    art = {'a':'la','o':'el'}
    def det(x): return 'la' if x.endswith(('a','ión','ad')) else 'el'
    t = R.randrange(8)
    x = n(nn)
    if t == 0: s = f"{det(x)} {x} {n(a)} está en {n(['la','el'])} {n(nn)}"
    elif t == 1: s = f"{n(['yo','nosotros','ellos','tú'])} {conj(n(verbs))} {n(['los','las'])} {pl(n(nn))} {n(ES['time'])}"
    elif t == 2: s = f"{n(['mi','tu','su'])} {x} {conj(n(verbs))} {n(ES['time'])}"
    elif t == 3: s = f"hace {n(['calor','frío','sol'])} {n(ES['time'])} en la {n(['ciudad','playa','montaña','calle'])}"
    elif t == 4: s = f"dónde está {det(x)} {x}"
    elif t == 5: s = f"muchas gracias por {det(x)} {x} {n(a)}"
    elif t == 6: s = f"no {conj(n(verbs))} {n(['agua','leche','café','pan'])} porque {n(['es','está'])} {n(a)}"
    else: s = f"hola, buenos días, {n(['amigo','maestro'])}"
    return s[0].upper()+s[1:] + R.choice(['.', '.', '!', '?', ''])

def gl_sentence():
    n = R.choice; nn = GL['noun']; a = GL['adj']
    def pl(x):
        if x[-1] in 'aeiou': return x+'s'
        return x+'es'
    def conj(v): return v[:-2]+R.choice(['o','as','a','amos','ades','an'])
    t = R.randrange(6)
    if t == 0: s = f"{n(['o','unha'])} {n(nn)} {n(a)} {n(['ten','pode'])} {n(['auga','leite','tempo'])}"
    elif t == 1: s = f"{n(['eu','nós','eles','ti'])} {conj(n(GL['verb_ar']))} {n(GL['time'])} na {n(nn)}"
    elif t == 2: s = f"{n(['meu','teu','seu','noso'])} {n(nn)} {conj(n(GL['verb_ar']))} {n(GL['time'])}"
    elif t == 3: s = f"grazas, {n(['ola','bo día','boas noites'])}, {n(nn)}"
    elif t == 4: s = f"onde {n(['imos','vou','quero'])} {conj(n(GL['verb_ar']))} {n(GL['time'])}"
    else: s = f"{n(['xa','aínda'])} non {conj(n(GL['verb_ar']))} {n(['os','unhas'])} {pl(n(nn))} {n(a)}"
    return s[0].upper()+s[1:] + R.choice(['.', '.', '!', '?', ''])

def write_dic(path, roots):
    roots = sorted(set(roots))
    with open(path,'w') as f:
        f.write(f"{len(roots)}\n")
        for r in roots: f.write(r+"\n")

en_roots = [w+'/S' for w in EN['noun']] + [w+'/DGS' for w in EN['verb']] + EN['adj'] + EN['other'] + EN['subj'] + EN['poss'] + EN['prep'] + ['today','tomorrow','yesterday','now','always','sometimes','morning','in','not','did','lock/UDGS','behind','near','are','you']
en_roots = [w for w in en_roots if w != 'I'] + ['I']
es_roots = [w+'/S' for w in ES['noun']] + [w+'/A' for w in ES['verb_ar']] + [w+'/E' for w in ES['verb_er']] + [w+'/S' for w in ES['adj']] + ES['other'] + [w for t in ES['time'] for w in t.split()] + ['muchas','dónde','días','estar','hacer']
gl_roots = [w+'/S' for w in GL['noun']] + [w+'/A' for w in GL['verb_ar']] + [w+'/S' for w in GL['adj']] + GL['other'] + [w for t in GL['time'] for w in t.split()] + ['noites','días']

# es and gl fixture lexicons must stay disjoint
es_words = {r.split('/')[0] for r in es_roots}
gl_roots = [r for r in gl_roots if r.split('/')[0] not in es_words]
clash = {r.split('/')[0] for r in gl_roots} & es_words
assert not clash, clash
write_dic(f'{root}/dicts/en_US.dic', en_roots)
write_dic(f'{root}/dicts/es_ES.dic', es_roots)
write_dic(f'{root}/dicts/gl_ES.dic', gl_roots)

def uniq(gen, k):
    out, seen = [], set()
    while len(out) < k:
        s = gen()
        if s not in seen:
            seen.add(s); out.append(s)
    return out

en_train = uniq(en_sentence, 300); es_train = uniq(es_sentence, 300)
with open(f'{root}/demo/corpus.tsv','w') as f:
    rows = [('en', s) for s in en_train] + [('es', s) for s in es_train]
    R.shuffle(rows)
    for l, s in rows: f.write(f"{l}\t{s}\n")
train_set = set(en_train) | set(es_train)
en_gold = uniq(lambda: (lambda s: s if s not in train_set else None)(en_sentence()) or 'Hello, world', 60)
es_gold = uniq(lambda: (lambda s: s if s not in train_set else None)(es_sentence()) or 'Hola, mundo', 60)
with open(f'{root}/demo/gold.tsv','w') as f:
    for s in en_gold: f.write(f"en\t{s}\n")
    for s in es_gold: f.write(f"es\t{s}\n")

gl_g = uniq(gl_sentence, 50); es_g = uniq(es_sentence, 50)
with open(f'{root}/galician/gold.tsv','w') as f:
    for s in gl_g: f.write(f"gl\t{s}\n")
    for s in es_g: f.write(f"es\t{s}\n")

# Latin vs Cyrillic
RU = ['я','ты','он','она','мы','дом','кошка','собака','город','книга','вода','хлеб','молоко','большой','маленький','красивый','новый','старый','читать','писать','любить','видеть','сегодня','завтра','вчера','здесь','там','очень','хорошо','плохо','и','в','на','с','не','это','день','ночь','утро','вечер','солнце','дождь','река','улица','школа','друг','семья','работа','музыка','время']
def ru_sentence():
    s = ' '.join(R.choice(RU) for _ in range(R.randint(3, 8)))
    return s[0].upper()+s[1:]+R.choice(['.','!','?',''])
with open(f'{root}/separable/corpus.tsv','w') as f:
    rows = [('en', s) for s in uniq(en_sentence, 100)] + [('ru', s) for s in uniq(ru_sentence, 100)]
    R.shuffle(rows)
    for l, s in rows: f.write(f"{l}\t{s}\n")
