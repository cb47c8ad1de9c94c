import yargs from 'yargs';
import { hideBin } from 'yargs/helpers';
import { loadConfig } from './config.js';
import { train } from './train.js';

async function main() {
  await yargs(hideBin(process.argv))
    .command(
      'train',
      'train the fusion network on a supervision-pair directory',
      (y) =>
        y
          .option('root', { type: 'string', demandOption: true,
                            describe: 'pair directory produced by the generator' })
          .option('config', { type: 'string',
                              describe: 'flat key=value training config' })
          .option('out', { type: 'string', default: 'runs/latest',
                           describe: 'output directory for checkpoint and loss log' }),
      (argv) => {
        const cfg = loadConfig(argv.config);
        const result = train(argv.root, cfg, argv.out);
        const first = result.log[0]?.loss;
        const last = result.log[result.log.length - 1]?.loss;
        console.log(`steps: ${result.log.length}, loss ${first} -> ${last}`);
        console.log(`checkpoint: ${result.checkpointPath}`);
        console.log(`loss log: ${result.logPath}`);
      }
    )
    .demandCommand(1)
    .strict()
    .parse();
}

main().catch((err) => {
  console.error(err instanceof Error ? err.message : err);
  process.exit(1);
});
